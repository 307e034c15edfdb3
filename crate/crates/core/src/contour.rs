//! Marching squares on a rectangular grid, optionally periodic in both
//! directions (a torus such as a surface Brillouin zone).
//!
//! Points are returned in fractional grid coordinates `(i, j)`; callers map
//! them to momenta. Saddle cells are resolved with the cell-centre average.
//! On a torus the polylines are unwrapped while they are traced, so a closed
//! curve that winds around the zone ends one period away from its start and
//! reports that as its winding.

use std::collections::HashMap;

/// Values on an `nx × ny` grid, stored row-major as `values[i * ny + j]`.
#[derive(Debug, Clone)]
pub struct ScalarGrid {
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
    pub periodic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    /// The last point joins the first (possibly after `winding` periods).
    pub closed: bool,
    /// Net number of periods crossed along `(i, j)` for closed torus curves.
    pub winding: [i64; 2],
}

impl Polyline {
    /// Signed shoelace area in grid units; zero for open or winding curves.
    pub fn area(&self) -> f64 {
        if !self.closed || self.winding != [0, 0] || self.points.len() < 3 {
            return 0.0;
        }
        let n = self.points.len();
        let mut s = 0.0;
        for a in 0..n {
            let p = self.points[a];
            let q = self.points[(a + 1) % n];
            s += p[0] * q[1] - q[0] * p[1];
        }
        0.5 * s
    }
}

impl ScalarGrid {
    pub fn new(nx: usize, ny: usize, values: Vec<f64>, periodic: bool) -> Self {
        assert_eq!(values.len(), nx * ny);
        Self {
            nx,
            ny,
            values,
            periodic,
        }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[(i % self.nx) * self.ny + (j % self.ny)]
    }
}

/// Edge between grid node `(i, j)` and its neighbour along `dir` (0: +i,
/// 1: +j). Indices are wrapped on a torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Edge {
    i: usize,
    j: usize,
    dir: u8,
}

/// Level set `f = level`. Non-finite samples never produce crossings.
pub fn marching_squares(grid: &ScalarGrid, level: f64) -> Vec<Polyline> {
    let (nx, ny) = (grid.nx, grid.ny);
    let (cx, cy) = if grid.periodic {
        (nx, ny)
    } else {
        (nx.saturating_sub(1), ny.saturating_sub(1))
    };
    let wrap = |e: Edge| Edge {
        i: e.i % nx,
        j: e.j % ny,
        dir: e.dir,
    };

    // each crossing edge links to at most two others through the cells it borders
    let mut links: HashMap<Edge, Vec<Edge>> = HashMap::new();
    let mut order: Vec<Edge> = Vec::new();
    for i in 0..cx {
        for j in 0..cy {
            let v = [
                grid.at(i, j),
                grid.at(i + 1, j),
                grid.at(i + 1, j + 1),
                grid.at(i, j + 1),
            ];
            if v.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let above: Vec<bool> = v.iter().map(|&x| x >= level).collect();
            // cell edges in counter-clockwise order: bottom, right, top, left
            let edges = [
                Edge { i, j, dir: 0 },
                Edge {
                    i: i + 1,
                    j,
                    dir: 1,
                },
                Edge {
                    i,
                    j: j + 1,
                    dir: 0,
                },
                Edge { i, j, dir: 1 },
            ]
            .map(wrap);
            let crossing: Vec<usize> = (0..4).filter(|&e| above[e] != above[(e + 1) % 4]).collect();
            let pairs: Vec<(usize, usize)> = match crossing.len() {
                2 => vec![(crossing[0], crossing[1])],
                4 => {
                    let centre = v.iter().sum::<f64>() / 4.0;
                    // join around the corners whose side differs from the centre
                    if (centre >= level) == above[0] {
                        vec![(0, 1), (2, 3)]
                    } else {
                        vec![(3, 0), (1, 2)]
                    }
                }
                _ => vec![],
            };
            for (a, b) in pairs {
                for (x, y) in [(edges[a], edges[b]), (edges[b], edges[a])] {
                    let entry = links.entry(x).or_insert_with(|| {
                        order.push(x);
                        Vec::new()
                    });
                    entry.push(y);
                }
            }
        }
    }

    let point = |e: &Edge| -> [f64; 2] {
        let (a, b) = if e.dir == 0 {
            (grid.at(e.i, e.j), grid.at(e.i + 1, e.j))
        } else {
            (grid.at(e.i, e.j), grid.at(e.i, e.j + 1))
        };
        let t = if a == b {
            0.5
        } else {
            ((level - a) / (b - a)).clamp(0.0, 1.0)
        };
        if e.dir == 0 {
            [e.i as f64 + t, e.j as f64]
        } else {
            [e.i as f64, e.j as f64 + t]
        }
    };
    // shortest periodic displacement between two wrapped points
    let step = |from: [f64; 2], to: [f64; 2]| -> [f64; 2] {
        let mut d = [to[0] - from[0], to[1] - from[1]];
        if grid.periodic {
            for (c, n) in d.iter_mut().zip([nx as f64, ny as f64]) {
                *c -= n * (*c / n).round();
            }
        }
        d
    };

    let mut used: HashMap<Edge, bool> = HashMap::new();
    let mut out = Vec::new();
    // open chains start at degree-one edges; everything left afterwards is closed
    let mut starts: Vec<Edge> = order
        .iter()
        .copied()
        .filter(|e| links[e].len() == 1)
        .collect();
    starts.extend(order.iter().copied().filter(|e| links[e].len() != 1));
    for start in starts {
        if used.contains_key(&start) {
            continue;
        }
        let mut chain = vec![start];
        used.insert(start, true);
        let mut prev: Option<Edge> = None;
        let mut cur = start;
        let mut closed = false;
        loop {
            let next = links[&cur]
                .iter()
                .copied()
                .find(|n| Some(*n) != prev && !used.contains_key(n));
            match next {
                Some(n) => {
                    used.insert(n, true);
                    chain.push(n);
                    prev = Some(cur);
                    cur = n;
                }
                None => {
                    if chain.len() > 2 && links[&cur].contains(&start) {
                        closed = true;
                    }
                    break;
                }
            }
        }
        let mut pts = vec![point(&chain[0])];
        for e in &chain[1..] {
            let last = *pts.last().unwrap();
            let d = step(last, point(e));
            pts.push([last[0] + d[0], last[1] + d[1]]);
        }
        let mut winding = [0, 0];
        if closed && grid.periodic {
            let last = *pts.last().unwrap();
            let d = step(last, point(&chain[0]));
            let end = [last[0] + d[0], last[1] + d[1]];
            winding = [
                ((end[0] - pts[0][0]) / nx as f64).round() as i64,
                ((end[1] - pts[0][1]) / ny as f64).round() as i64,
            ];
        }
        out.push(Polyline {
            points: pts,
            closed,
            winding,
        });
    }
    out
}
