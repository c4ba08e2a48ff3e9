//! Named example urns used throughout the test suites and as CLI shorthands.

use crate::urn::{Piece, PieceForm, UrnFunction};

/// Majority urn pi(s) = 3 s^2 - 2 s^3 (sample three, follow the majority).
pub fn majority3() -> UrnFunction {
    UrnFunction::majority_sample(3, 0.0).expect("valid")
}

/// Subtractive balanced urn: pi = 1 on [0,1/3), 2 - 3s on [1/3,2/3],
/// 0 on (2/3,1]. Equals the clamped linear urn with a = 2, b = -3.
pub fn subtractive_example() -> UrnFunction {
    UrnFunction::linear(2.0, -3.0).expect("valid")
}

/// Cusp urn with square-root contact approach on each of the four segments:
///
///   pi(s) = s + sqrt(1/4 - s)                        on [0, 1/4]
///   pi(s) = s + sqrt((s - 1/4)(1/2 - s))             on (1/4, 1/2]
///   pi(s) = s - sqrt((s - 1/2)(3/4 - s))             on (1/2, 3/4]
///   pi(s) = s - sqrt(s - 3/4)                        on (3/4, 1]
///
/// Contacts sit at 1/4 (touchpoint from above), 1/2 (downcrossing) and 3/4
/// (touchpoint from below). On (1/4, 1/2) the reciprocal 1/(pi(z)-z) is
/// integrable at both ends, which makes the zero-cost exit time positive and
/// the family constants take the arcsine closed form with theta* = e^{-pi}.
pub fn arcsin_example() -> UrnFunction {
    let pieces = vec![
        Piece {
            lo: 0.0,
            hi: 0.25,
            form: PieceForm::PolySqrt {
                poly: vec![0.0, 1.0],
                coeff: 1.0,
                radicand: vec![0.25, -1.0],
            },
        },
        Piece {
            lo: 0.25,
            hi: 0.5,
            form: PieceForm::PolySqrt {
                poly: vec![0.0, 1.0],
                coeff: 1.0,
                // (s - 1/4)(1/2 - s) = -1/8 + 3/4 s - s^2
                radicand: vec![-0.125, 0.75, -1.0],
            },
        },
        Piece {
            lo: 0.5,
            hi: 0.75,
            form: PieceForm::PolySqrt {
                poly: vec![0.0, 1.0],
                coeff: -1.0,
                // (s - 1/2)(3/4 - s) = -3/8 + 5/4 s - s^2
                radicand: vec![-0.375, 1.25, -1.0],
            },
        },
        Piece {
            lo: 0.75,
            hi: 1.0,
            form: PieceForm::PolySqrt {
                poly: vec![0.0, 1.0],
                coeff: -1.0,
                radicand: vec![-0.75, 1.0],
            },
        },
    ];
    UrnFunction::piecewise(pieces).expect("valid")
}

/// Piecewise-linear urn reproducing the five-interval sign pattern
/// {+1, -1, +1, 0, -1}: crosses down at 1/5, up at 2/5, down at 3/5 into the
/// plateau [3/5, 4/5], then stays below the diagonal.
pub fn sign_pattern_example() -> UrnFunction {
    let seg = |x0: f64, y0: f64, x1: f64, y1: f64| -> Vec<f64> {
        let slope = (y1 - y0) / (x1 - x0);
        vec![y0 - slope * x0, slope]
    };
    let pieces = vec![
        Piece {
            lo: 0.0,
            hi: 0.2,
            form: PieceForm::Poly(seg(0.0, 0.3, 0.2, 0.2)),
        },
        Piece {
            lo: 0.2,
            hi: 0.3,
            form: PieceForm::Poly(seg(0.2, 0.2, 0.3, 0.22)),
        },
        Piece {
            lo: 0.3,
            hi: 0.4,
            form: PieceForm::Poly(seg(0.3, 0.22, 0.4, 0.4)),
        },
        Piece {
            lo: 0.4,
            hi: 0.5,
            form: PieceForm::Poly(seg(0.4, 0.4, 0.5, 0.58)),
        },
        Piece {
            lo: 0.5,
            hi: 0.6,
            form: PieceForm::Poly(seg(0.5, 0.58, 0.6, 0.6)),
        },
        Piece {
            lo: 0.6,
            hi: 0.8,
            form: PieceForm::Poly(vec![0.0, 1.0]),
        },
        Piece {
            lo: 0.8,
            hi: 1.0,
            form: PieceForm::Poly(seg(0.8, 0.8, 1.0, 0.9)),
        },
    ];
    UrnFunction::piecewise(pieces).expect("valid")
}
