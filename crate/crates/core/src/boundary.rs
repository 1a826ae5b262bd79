//! Images of the unit circle and an exact self-intersection scan.

use std::f64::consts::PI;
use std::io;

use num_complex::Complex64;
use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RealPoly;

pub const MIN_RESOLUTION: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub t: f64,
    #[serde(with = "crate::roots::complex_fields")]
    pub w: Complex64,
}

/// `f(e^{it})` at `t_k = 2πk/resolution`, `k = 0..resolution`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryImage {
    pub resolution: usize,
    pub samples: Vec<BoundarySample>,
}

impl BoundaryImage {
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        #[derive(Serialize)]
        struct Row {
            t: f64,
            re: f64,
            im: f64,
        }
        let mut wr = csv::Writer::from_writer(out);
        for s in &self.samples {
            wr.serialize(Row {
                t: s.t,
                re: s.w.re,
                im: s.w.im,
            })?;
        }
        wr.flush()?;
        Ok(())
    }
}

pub fn boundary_image(f: &RealPoly, resolution: usize) -> Result<BoundaryImage> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "boundary resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let samples = (0..resolution)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / resolution as f64;
            BoundarySample {
                t,
                w: f.eval(Complex64::from_polar(1.0, t)),
            }
        })
        .collect();
    Ok(BoundaryImage {
        resolution,
        samples,
    })
}

fn coord(z: Complex64) -> Coord<f64> {
    Coord { x: z.re, y: z.im }
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// `c` lies in the bounding box of `ab`; only meaningful when collinear.
fn within(a: Coord<f64>, b: Coord<f64>, c: Coord<f64>) -> bool {
    c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
}

/// Closed-segment intersection with exact orientation predicates.
fn segments_meet(a: Coord<f64>, b: Coord<f64>, c: Coord<f64>, d: Coord<f64>) -> bool {
    let o1 = sign(orient2d(a, b, c));
    let o2 = sign(orient2d(a, b, d));
    let o3 = sign(orient2d(c, d, a));
    let o4 = sign(orient2d(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within(a, b, c))
        || (o2 == 0 && within(a, b, d))
        || (o3 == 0 && within(c, d, a))
        || (o4 == 0 && within(c, d, b))
}

/// Whether the closed polyline through the samples is simple: no two
/// non-adjacent chords cross, touch, or overlap.
pub fn simple_curve_scan(img: &BoundaryImage) -> bool {
    let pts: Vec<Coord<f64>> = img.samples.iter().map(|s| coord(s.w)).collect();
    let m = pts.len();
    if m < 4 {
        return true;
    }
    let seg = |i: usize| (pts[i], pts[(i + 1) % m]);
    let bounds: Vec<(f64, f64, f64, f64)> = (0..m)
        .map(|i| {
            let (a, b) = seg(i);
            (a.x.min(b.x), a.x.max(b.x), a.y.min(b.y), a.y.max(b.y))
        })
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| bounds[i].0.total_cmp(&bounds[j].0));

    for (pos, &i) in order.iter().enumerate() {
        let (_, max_x, min_y, max_y) = bounds[i];
        for &j in &order[pos + 1..] {
            let (other_min_x, _, other_min_y, other_max_y) = bounds[j];
            if other_min_x > max_x {
                break;
            }
            let gap = i.abs_diff(j);
            if gap <= 1 || gap == m - 1 {
                continue;
            }
            if other_min_y > max_y || other_max_y < min_y {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if segments_meet(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::univalent::{alexander, f_family, fejer};

    #[test]
    fn identity_is_simple() {
        let img = boundary_image(&RealPoly::new(vec![0.0, 1.0]), 64).unwrap();
        assert_eq!(img.samples.len(), 64);
        assert!(simple_curve_scan(&img));
    }

    #[test]
    fn square_wraps_twice() {
        for res in [16, 64, 128, 4096] {
            let img = boundary_image(&RealPoly::monomial(1.0, 2), res).unwrap();
            assert!(!simple_curve_scan(&img), "resolution {res}");
        }
    }

    #[test]
    fn figure_eight_is_not_simple() {
        // z + 2z^2 has a critical point inside the disk, so its image loops
        let img = boundary_image(&RealPoly::new(vec![0.0, 1.0, 2.0]), 256).unwrap();
        assert!(!simple_curve_scan(&img));
    }

    #[test]
    fn univalent_families_are_simple() {
        for n in (5..=15).step_by(2) {
            for s in 0..=2 {
                let img = boundary_image(f_family(s, n).unwrap().poly(), 1024).unwrap();
                assert!(simple_curve_scan(&img), "s={s} N={n}");
            }
        }
        for n in (6..=16).step_by(2) {
            for s in 3..=4 {
                let img = boundary_image(f_family(s, n).unwrap().poly(), 1024).unwrap();
                assert!(simple_curve_scan(&img), "s={s} N={n}");
            }
        }
        assert!(simple_curve_scan(&boundary_image(fejer(8).unwrap().poly(), 512).unwrap()));
        assert!(simple_curve_scan(&boundary_image(alexander(8).unwrap().poly(), 512).unwrap()));
    }

    #[test]
    fn resolution_floor() {
        assert!(boundary_image(&RealPoly::new(vec![0.0, 1.0]), 15).is_err());
    }

    #[test]
    fn csv_header() {
        let img = boundary_image(&RealPoly::new(vec![0.0, 1.0]), 16).unwrap();
        let mut buf = Vec::new();
        img.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,re,im\n0.0,1.0,0.0\n"));
        assert_eq!(text.lines().count(), 17);
    }
}
