//! Planar polygons and wedges with closed-form distances and gauges.

use rand::Rng;

pub(crate) type P2 = [f64; 2];

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn norm(a: P2) -> f64 {
    dot(a, a).sqrt()
}

fn seg_dist(p: P2, a: P2, b: P2) -> f64 {
    let ab = sub(b, a);
    let t = (dot(sub(p, a), ab) / dot(ab, ab)).clamp(0.0, 1.0);
    norm(sub(p, [a[0] + t * ab[0], a[1] + t * ab[1]]))
}

fn ray_dist(p: P2, apex: P2, r: P2) -> f64 {
    let t = (dot(sub(p, apex), r) / dot(r, r)).max(0.0);
    norm(sub(p, [apex[0] + t * r[0], apex[1] + t * r[1]]))
}

/// Convex polygon, vertices counter-clockwise.
#[derive(Debug, Clone)]
pub(crate) struct Polygon {
    pub vertices: Vec<P2>,
}

impl Polygon {
    /// Star-shaped random polygon around the origin: one vertex per angular
    /// sector, radii in `[r_lo, r_hi]`; with `k ≥ 4` sectors no angular gap
    /// reaches π, so the origin is interior.
    pub fn random_star(rng: &mut impl Rng, k: usize, r_lo: f64, r_hi: f64) -> Polygon {
        let pts: Vec<P2> = (0..k)
            .map(|j| {
                let th = (j as f64 + 0.9 * rng.gen::<f64>()) * std::f64::consts::TAU / k as f64;
                let r = r_lo + (r_hi - r_lo) * rng.gen::<f64>();
                [r * th.cos(), r * th.sin()]
            })
            .collect();
        Polygon::hull(&pts)
    }

    pub fn hull(points: &[P2]) -> Polygon {
        let dv: Vec<crate::vector::DenseVector> = points.iter().map(|p| crate::vector::DenseVector::from_slice(p)).collect();
        let h = crate::sets::vrep::planar_hull(&dv);
        Polygon { vertices: h.iter().map(|p| [p[0], p[1]]).collect() }
    }

    fn edges(&self) -> impl Iterator<Item = (P2, P2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn contains(&self, p: P2) -> bool {
        self.edges().all(|(a, b)| cross(sub(b, a), sub(p, a)) >= 0.0)
    }

    pub fn distance(&self, p: P2) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.edges().map(|(a, b)| seg_dist(p, a, b)).fold(f64::INFINITY, f64::min)
    }

    /// Minkowski gauge; the origin must be interior.
    pub fn gauge(&self, p: P2) -> f64 {
        self.edges()
            .map(|(a, b)| {
                // outward normal of edge a→b with ⟨n, a⟩ > 0
                let n = [b[1] - a[1], a[0] - b[0]];
                dot(n, p) / dot(n, a)
            })
            .fold(0.0, f64::max)
    }

    /// Gauge of `W + rB`: `p ∈ t(W + rB)` iff `dist(p/t, W) ≤ r`, bisected in `t`.
    pub fn enlarged_gauge(&self, p: P2, r: f64) -> f64 {
        if norm(p) == 0.0 {
            return 0.0;
        }
        let inside = |t: f64| self.distance([p[0] / t, p[1] / t]) <= r;
        let mut hi = self.gauge(p).max(1e-300);
        if r > 0.0 {
            let mut lo = 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if inside(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
        hi
    }

    /// Uniform sample by area-weighted fan triangulation.
    pub fn sample(&self, rng: &mut impl Rng) -> P2 {
        let v = &self.vertices;
        let areas: Vec<f64> = (1..v.len() - 1).map(|i| 0.5 * cross(sub(v[i], v[0]), sub(v[i + 1], v[0]))).collect();
        let total: f64 = areas.iter().sum();
        let mut pick = rng.gen::<f64>() * total;
        let mut i = 0;
        while i + 1 < areas.len() && pick > areas[i] {
            pick -= areas[i];
            i += 1;
        }
        let (mut s, mut t): (f64, f64) = (rng.gen(), rng.gen());
        if s + t > 1.0 {
            s = 1.0 - s;
            t = 1.0 - t;
        }
        let (a, b, c) = (v[0], v[i + 1], v[i + 2]);
        [a[0] + s * (b[0] - a[0]) + t * (c[0] - a[0]), a[1] + s * (b[1] - a[1]) + t * (c[1] - a[1])]
    }
}

/// `apex + cone{r1, r2}` with `r1, r2` linearly independent.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Wedge {
    pub apex: P2,
    pub r1: P2,
    pub r2: P2,
}

impl Wedge {
    pub fn distance(&self, p: P2) -> f64 {
        let q = sub(p, self.apex);
        let det = cross(self.r1, self.r2);
        let alpha = cross(q, self.r2) / det;
        let beta = cross(self.r1, q) / det;
        if alpha >= 0.0 && beta >= 0.0 {
            return 0.0;
        }
        ray_dist(p, self.apex, self.r1).min(ray_dist(p, self.apex, self.r2))
    }
}
