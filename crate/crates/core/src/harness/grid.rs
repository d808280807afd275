use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::jet::Point4;

/// Closed intervals for `t, x1, x2, x3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box4 {
    pub t: [f64; 2],
    pub x1: [f64; 2],
    pub x2: [f64; 2],
    pub x3: [f64; 2],
}

impl Default for Box4 {
    fn default() -> Self {
        Box4 {
            t: [0.0, 1.0],
            x1: [0.0, 1.0],
            x2: [0.0, 1.0],
            x3: [0.0, 1.0],
        }
    }
}

impl Box4 {
    pub fn axes(&self) -> [[f64; 2]; 4] {
        [self.t, self.x1, self.x2, self.x3]
    }

    pub fn from_axes(a: [[f64; 2]; 4]) -> Self {
        Box4 {
            t: a[0],
            x1: a[1],
            x2: a[2],
            x3: a[3],
        }
    }
}

const AXIS_NAMES: [&str; 4] = ["t", "x1", "x2", "x3"];

/// Tensor-product grid with inclusive endpoints, in lexicographic
/// `(t, x1, x2, x3)` order (x3 varies fastest).
pub fn sample_grid(bx: &Box4, samples: [usize; 4]) -> Result<Vec<Point4>, HarnessError> {
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(4);
    for (k, ([a, b], n)) in bx.axes().into_iter().zip(samples).enumerate() {
        let name = AXIS_NAMES[k];
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(HarnessError::Config(format!("{name}: interval [{a}, {b}] is invalid")));
        }
        if n == 0 {
            return Err(HarnessError::Config(format!("{name}: samples must be positive")));
        }
        let values = if a == b {
            if n > 1 {
                return Err(HarnessError::Config(format!(
                    "{name}: degenerate interval [{a}, {b}] cannot take {n} samples"
                )));
            }
            vec![a]
        } else {
            if n < 2 {
                return Err(HarnessError::Config(format!(
                    "{name}: a non-degenerate interval needs at least 2 samples"
                )));
            }
            let step = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
                .collect()
        };
        axes.push(values);
    }

    let mut points = Vec::with_capacity(axes.iter().map(Vec::len).product());
    for &t in &axes[0] {
        for &x1 in &axes[1] {
            for &x2 in &axes[2] {
                for &x3 in &axes[3] {
                    points.push(Point4::new(t, x1, x2, x3));
                }
            }
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degenerate_except_x1(n: usize) -> (Box4, [usize; 4]) {
        let bx = Box4 {
            t: [0.0, 0.0],
            x1: [0.0, 1.0],
            x2: [0.0, 0.0],
            x3: [0.0, 0.0],
        };
        (bx, [1, n, 1, 1])
    }

    #[test]
    fn single_axis() {
        let (bx, s) = degenerate_except_x1(3);
        let pts = sample_grid(&bx, s).unwrap();
        assert_eq!(pts.iter().map(|p| p.x1).collect::<Vec<_>>(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn full_grid_count_and_order() {
        let pts = sample_grid(&Box4::default(), [2; 4]).unwrap();
        assert_eq!(pts.len(), 16);
        assert_eq!(pts[0], Point4::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(pts[1], Point4::new(0.0, 0.0, 0.0, 1.0));
        assert_eq!(pts[15], Point4::new(1.0, 1.0, 1.0, 1.0));
        let coords: Vec<[f64; 4]> = pts.iter().map(Point4::coords).collect();
        assert!(coords.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn degenerate_axis_single_point() {
        let bx = Box4 {
            t: [0.25, 0.25],
            ..Box4::default()
        };
        let pts = sample_grid(&bx, [1, 2, 2, 2]).unwrap();
        assert_eq!(pts.len(), 8);
        assert!(pts.iter().all(|p| p.t == 0.25));
    }

    #[test]
    fn config_errors() {
        let bx = Box4 {
            t: [0.25, 0.25],
            ..Box4::default()
        };
        assert!(sample_grid(&bx, [2, 2, 2, 2]).is_err());
        assert!(sample_grid(&Box4::default(), [1, 2, 2, 2]).is_err());
        assert!(sample_grid(&Box4::default(), [0, 2, 2, 2]).is_err());
        let bad = Box4 {
            x2: [1.0, 0.0],
            ..Box4::default()
        };
        assert!(sample_grid(&bad, [2; 4]).is_err());
    }
}
