//! Correspondence between balanced Bagchi-Pal reinforcement matrices and
//! clamped linear urn functions.
//!
//! A balanced matrix [[a11, a12], [a21, a22]] with row sum M maps to the
//! linear urn pi(s) = s0 + b (s - s0) through
//!
//!     s0 = (M - a22) / (2M - a11 - a22),   b = (a11 + a22)/M - 1,
//!
//! and back through A = M [[b + s0(1-b), (1-s0)(1-b)], [s0(1-b), 1 - s0(1-b)]].
//! The round trip is the correctness certificate for the sign of s0: with the
//! subtractive example a11 = a22 = -1, a12 = a21 = 2 the formulas above give
//! s0 = 1/2, b = -3 and reproduce the matrix exactly, which the variant with
//! numerator a22 - M does not.
//!
//! The count-level change of variable is X_k = (B_k - (M - a22) k) / (a11 +
//! a22 - M), so the urn-fraction process of the linear urn tracks the black
//! count B_k affinely.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::urn::UrnFunction;

/// Balanced two-color reinforcement matrix with initial ball counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BagchiPalMatrix {
    pub a11: i64,
    pub a12: i64,
    pub a21: i64,
    pub a22: i64,
    #[serde(rename = "B0", default)]
    pub b0: i64,
    #[serde(rename = "W0", default)]
    pub w0: i64,
}

/// Tenability diagnosis; violations warn rather than fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tenability {
    pub balance_positive: bool,
    pub off_diagonal_nonnegative: bool,
    pub removal_divisibility: bool,
}

impl Tenability {
    pub fn is_tenable(&self) -> bool {
        self.balance_positive && self.off_diagonal_nonnegative && self.removal_divisibility
    }
}

/// Result of translating a matrix to its linear urn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearTranslation {
    /// Fixed point of the affine map (meaningless in the Polya case).
    pub s0: f64,
    /// Slope of the urn function.
    pub b: f64,
    /// Balance M.
    pub m: i64,
    /// a12 = a21 = 0: the urn is the Polya identity (b = 1, s0 undefined).
    pub polya: bool,
    /// Initial time of the rescaled count process, (B0 + W0)/M.
    pub init_time: f64,
    /// Initial value X_m of the rescaled count process.
    pub init_count: f64,
    pub tenability: Tenability,
}

impl BagchiPalMatrix {
    pub fn new(a11: i64, a12: i64, a21: i64, a22: i64, b0: i64, w0: i64) -> Result<Self> {
        let m = Self {
            a11,
            a12,
            a21,
            a22,
            b0,
            w0,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn balance(&self) -> i64 {
        self.a11 + self.a12
    }

    pub fn validate(&self) -> Result<()> {
        if self.a11 + self.a12 != self.a21 + self.a22 {
            return Err(Error::validation(format!(
                "matrix is not balanced: row sums {} vs {}",
                self.a11 + self.a12,
                self.a21 + self.a22
            )));
        }
        if self.b0 < 0 || self.w0 < 0 {
            return Err(Error::validation("initial ball counts must be non-negative".into()));
        }
        let m = self.balance();
        if self.a11 + self.a22 - m == 0 {
            return Err(Error::validation(
                "degenerate matrix: a11 + a22 - M = 0 gives deterministic evolution".into(),
            ));
        }
        Ok(())
    }

    /// Tenability flags: M > 0, non-negative off-diagonal entries, and the
    /// divisibility conditions that keep subtractive urns from stalling.
    pub fn tenability(&self) -> Tenability {
        let m = self.balance();
        let mut divis = true;
        if self.a11 < 0 {
            divis &= self.w0 % self.a11 == 0 && self.a21 % self.a11 == 0;
        }
        if self.a22 < 0 {
            divis &= self.b0 % self.a22 == 0 && self.a12 % self.a22 == 0;
        }
        Tenability {
            balance_positive: m > 0,
            off_diagonal_nonnegative: self.a12 >= 0 && self.a21 >= 0,
            removal_divisibility: divis,
        }
    }

    /// Apply the count-level change of variable at (black count, time).
    pub fn count_to_state(&self, black: f64, k: f64) -> f64 {
        let m = self.balance() as f64;
        (black - (m - self.a22 as f64) * k) / (self.a11 as f64 + self.a22 as f64 - m)
    }
}

/// Translate a balanced matrix to its clamped linear urn parameters.
pub fn bagchi_pal_to_linear(matrix: &BagchiPalMatrix) -> Result<LinearTranslation> {
    matrix.validate()?;
    let m = matrix.balance();
    let mf = m as f64;
    let b = (matrix.a11 + matrix.a22) as f64 / mf - 1.0;
    let denom = (2 * m - matrix.a11 - matrix.a22) as f64;
    let polya = matrix.a12 == 0 && matrix.a21 == 0;
    let s0 = if polya {
        // b = 1: the urn function is the identity regardless of s0
        0.5
    } else {
        (mf - matrix.a22 as f64) / denom
    };
    let init_time = (matrix.b0 + matrix.w0) as f64 / mf;
    let init_count = matrix.count_to_state(matrix.b0 as f64, init_time);
    Ok(LinearTranslation {
        s0,
        b,
        m,
        polya,
        init_time,
        init_count,
        tenability: matrix.tenability(),
    })
}

impl LinearTranslation {
    /// The urn function pi(s) = clip(s0 + b (s - s0)) as a Linear kind.
    pub fn urn_function(&self) -> Result<UrnFunction> {
        UrnFunction::linear(self.s0 * (1.0 - self.b), self.b)
    }
}

/// Translate linear urn parameters (s0, b) and a balance M back to the
/// integer reinforcement matrix. Entries must be integers within 1e-9.
pub fn linear_to_bagchi_pal(
    s0: f64,
    b: f64,
    m: i64,
    b0: i64,
    w0: i64,
) -> Result<BagchiPalMatrix> {
    if m == 0 {
        return Err(Error::validation("balance M must be non-zero".into()));
    }
    let mf = m as f64;
    let raw = [
        mf * (b + s0 * (1.0 - b)),
        mf * (1.0 - s0) * (1.0 - b),
        mf * s0 * (1.0 - b),
        mf * (1.0 - s0 * (1.0 - b)),
    ];
    let mut rounded = [0i64; 4];
    for (i, &v) in raw.iter().enumerate() {
        let r = v.round();
        if (v - r).abs() > 1e-9 {
            return Err(Error::validation(format!(
                "matrix entry {v} is not an integer within 1e-9 (s0={s0}, b={b}, M={m})"
            )));
        }
        rounded[i] = r as i64;
    }
    BagchiPalMatrix::new(rounded[0], rounded[1], rounded[2], rounded[3], b0, w0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subtractive() -> BagchiPalMatrix {
        BagchiPalMatrix::new(-1, 2, 2, -1, 2, 2).unwrap()
    }

    #[test]
    fn subtractive_matrix_maps_to_half_and_minus_three() {
        let t = bagchi_pal_to_linear(&subtractive()).unwrap();
        assert!((t.s0 - 0.5).abs() < 1e-15);
        assert!((t.b + 3.0).abs() < 1e-15);
        assert_eq!(t.m, 1);
        // the associated urn function is the subtractive wall urn
        let u = t.urn_function().unwrap();
        assert_eq!(u.value(0.2), 1.0);
        assert!((u.value(0.5) - 0.5).abs() < 1e-15);
        assert_eq!(u.value(0.8), 0.0);
    }

    #[test]
    fn round_trips_are_identities() {
        // matrix -> (s0, b, M) -> matrix
        for mat in [
            subtractive(),
            BagchiPalMatrix::new(2, 1, 1, 2, 1, 1).unwrap(),
            BagchiPalMatrix::new(3, 1, 2, 2, 5, 3).unwrap(),
        ] {
            let t = bagchi_pal_to_linear(&mat).unwrap();
            let back = linear_to_bagchi_pal(t.s0, t.b, t.m, mat.b0, mat.w0).unwrap();
            assert_eq!(mat, back, "round trip failed for {mat:?}");
        }
        // (s0, b, M) -> matrix -> (s0, b, M)
        let mat = linear_to_bagchi_pal(0.5, 1.0 / 3.0, 3, 1, 1).unwrap();
        assert_eq!((mat.a11, mat.a12, mat.a21, mat.a22), (2, 1, 1, 2));
        let t = bagchi_pal_to_linear(&mat).unwrap();
        assert!((t.s0 - 0.5).abs() < 1e-12);
        assert!((t.b - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn polya_case_flagged() {
        let mat = BagchiPalMatrix::new(2, 0, 0, 2, 1, 1).unwrap();
        let t = bagchi_pal_to_linear(&mat).unwrap();
        assert!(t.polya);
        assert!((t.b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_matrix_rejected() {
        // a11 + a22 = M: deterministic evolution
        assert!(BagchiPalMatrix::new(1, 1, 1, 1, 1, 1).is_err());
        // unbalanced rows
        assert!(BagchiPalMatrix::new(1, 2, 1, 1, 1, 1).is_err());
    }

    #[test]
    fn non_integer_entries_rejected() {
        assert!(linear_to_bagchi_pal(0.5, -3.0, 2, 1, 1).is_ok());
        assert!(linear_to_bagchi_pal(0.3, -3.0, 1, 1, 1).is_err());
    }

    #[test]
    fn tenability_flags() {
        let t = subtractive().tenability();
        assert!(t.is_tenable());
        // negative off-diagonal breaks tenability but not validity
        let m = BagchiPalMatrix::new(3, -1, 1, 1, 1, 1).unwrap();
        assert!(!m.tenability().off_diagonal_nonnegative);
        assert!(!m.tenability().is_tenable());
    }

    #[test]
    fn state_change_of_variable() {
        let mat = subtractive();
        let t = bagchi_pal_to_linear(&mat).unwrap();
        // B0 = W0 = 2, M = 1: init time 4, X = (2 - 2*4)/(-3) = 2
        assert!((t.init_time - 4.0).abs() < 1e-15);
        assert!((t.init_count - 2.0).abs() < 1e-15);
    }
}
