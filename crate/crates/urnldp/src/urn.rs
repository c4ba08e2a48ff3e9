//! Urn functions: the map pi from the current black-ball fraction to the
//! probability of adding a black ball at the next step.
//!
//! An `UrnFunction` is immutable after construction, evaluates anywhere on
//! [0,1], and carries declared regularity metadata. Class membership (the
//! modulus-of-continuity condition) is not decidable from a function handle,
//! so the metadata is taken on trust and checked only by a grid falsifier.
//!
//! The `Linear` kind is the clamped affine family
//!     pi(s) = 1            if a + b s >= 1,
//!     pi(s) = a + b s      if 0 < a + b s < 1,
//!     pi(s) = 0            otherwise,
//! which covers every balanced Bagchi-Pal urn. `MajoritySample(z, p)` is the
//! market-share urn: sample z adopters, follow the majority with probability
//! 1-p and the minority with probability p; p = 0, z = 3 gives the classic
//! majority urn 3s^2 - 2s^3.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Interpolation rule for tabulated urn functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Interpolation {
    /// Piecewise linear: preserves [0,1] and the Lipschitz class.
    #[default]
    Linear,
    /// Fritsch-Carlson monotone cubic: C^1, no overshoot beyond data values.
    MonotoneCubic,
}

/// Declared modulus-of-continuity class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModulusClass {
    Lipschitz(f64),
    Hoelder { exponent: f64, constant: f64 },
    /// Declared member of the admissible class without a concrete modulus.
    DeclaredU,
    Unknown,
}

/// Regularity metadata attached to an urn function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityInfo {
    pub modulus_class: ModulusClass,
    /// Set once the grid falsifier has run without finding a violation.
    pub continuity_checked: bool,
}

impl RegularityInfo {
    pub fn unknown() -> Self {
        RegularityInfo {
            modulus_class: ModulusClass::Unknown,
            continuity_checked: false,
        }
    }
}

/// One closed-form piece of a piecewise urn function on [lo, hi].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub form: PieceForm,
}

/// Closed forms allowed inside a piece: polynomials, polynomial plus a
/// square-root term (for cusp examples), or a clipped view of another urn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceForm {
    /// Ascending-degree coefficients.
    Poly(Vec<f64>),
    /// poly(s) + coeff * sqrt(max(0, radicand(s))).
    PolySqrt {
        poly: Vec<f64>,
        coeff: f64,
        radicand: Vec<f64>,
    },
    /// Delegate to another urn function restricted to this piece.
    Urn(Box<UrnFunction>),
}

/// Representation of an urn function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UrnKind {
    Constant {
        p: f64,
    },
    /// Clamped affine pi(s) = clip(a + b s) with the indicator convention of
    /// the balanced Bagchi-Pal family.
    Linear {
        a: f64,
        b: f64,
    },
    Polynomial {
        coefficients: Vec<f64>,
    },
    /// Sample z adopters (z odd), follow the majority with probability 1-p.
    Majority {
        z: u32,
        p: f64,
    },
    Piecewise {
        pieces: Vec<Piece>,
    },
    Tabulated {
        points: Vec<(f64, f64)>,
        rule: Interpolation,
    },
}

/// An evaluatable urn function [0,1] -> [0,1] with regularity metadata.
#[derive(Debug, Serialize, Deserialize)]
pub struct UrnFunction {
    kind: UrnKind,
    regularity: RegularityInfo,
    #[serde(skip)]
    pchip_cache: OnceLock<Vec<f64>>,
}

impl Clone for UrnFunction {
    fn clone(&self) -> Self {
        UrnFunction {
            kind: self.kind.clone(),
            regularity: self.regularity,
            pchip_cache: OnceLock::new(),
        }
    }
}

impl PartialEq for UrnFunction {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.regularity == other.regularity
    }
}

/// Tolerance for arguments marginally outside [0,1].
const DOMAIN_TOL: f64 = 1e-12;

fn horner(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
}

/// Probability of a strict black majority among z draws at fraction s.
fn majority_prob(z: u32, s: f64) -> f64 {
    let z = z as u64;
    let mut sum = 0.0;
    // exact binomial summation over j > z/2
    for j in (z / 2 + 1)..=z {
        // C(z, j) s^j (1-s)^{z-j} accumulated multiplicatively
        let mut term = 1.0f64;
        for i in 0..j {
            term *= (z - i) as f64 / (i + 1) as f64;
        }
        sum += term * s.powi(j as i32) * (1.0 - s).powi((z - j) as i32);
    }
    sum.clamp(0.0, 1.0)
}

/// Fritsch-Carlson monotone cubic node derivatives.
fn pchip_derivatives(points: &[(f64, f64)]) -> Vec<f64> {
    let n = points.len();
    let mut d = vec![0.0; n];
    if n < 2 {
        return d;
    }
    let h: Vec<f64> = (0..n - 1).map(|i| points[i + 1].0 - points[i].0).collect();
    let slope: Vec<f64> = (0..n - 1)
        .map(|i| (points[i + 1].1 - points[i].1) / h[i])
        .collect();
    d[0] = slope[0];
    d[n - 1] = slope[n - 2];
    for i in 1..n - 1 {
        if slope[i - 1] * slope[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            // weighted harmonic mean keeps the interpolant monotone
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    d
}

impl UrnFunction {
    fn with_default_regularity(kind: UrnKind) -> Self {
        let modulus = match &kind {
            UrnKind::Constant { .. } => ModulusClass::Lipschitz(0.0),
            UrnKind::Linear { b, .. } => ModulusClass::Lipschitz(b.abs()),
            UrnKind::Polynomial { coefficients } => {
                let lip: f64 = coefficients
                    .iter()
                    .enumerate()
                    .map(|(i, c)| i as f64 * c.abs())
                    .sum();
                ModulusClass::Lipschitz(lip)
            }
            UrnKind::Majority { z, .. } => {
                // |pi'| <= z * C(z-1, (z-1)/2) / 2^{z-1} roughly; a grid bound
                // is simpler and safe
                ModulusClass::Lipschitz(0.75 * *z as f64)
            }
            UrnKind::Piecewise { pieces } => {
                if pieces
                    .iter()
                    .any(|p| matches!(p.form, PieceForm::PolySqrt { .. }))
                {
                    ModulusClass::Hoelder {
                        exponent: 0.5,
                        constant: 4.0,
                    }
                } else {
                    ModulusClass::DeclaredU
                }
            }
            UrnKind::Tabulated { points, rule } => {
                let max_slope = points
                    .windows(2)
                    .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
                    .fold(0.0, f64::max);
                let factor = match rule {
                    Interpolation::Linear => 1.0,
                    Interpolation::MonotoneCubic => 3.0,
                };
                ModulusClass::Lipschitz(factor * max_slope)
            }
        };
        UrnFunction {
            kind,
            regularity: RegularityInfo {
                modulus_class: modulus,
                continuity_checked: false,
            },
            pchip_cache: OnceLock::new(),
        }
    }

    fn validated(kind: UrnKind) -> Result<Self> {
        let mut u = Self::with_default_regularity(kind);
        u.validate_range()?;
        u.regularity.continuity_checked = u.check_modulus().is_ok();
        Ok(u)
    }

    /// Constant urn pi = p.
    pub fn constant(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::validation(format!("constant urn needs p in [0,1], got {p}")));
        }
        Self::validated(UrnKind::Constant { p })
    }

    /// Clamped linear urn pi(s) = clip(a + b s).
    pub fn linear(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::validation("linear urn parameters must be finite".into()));
        }
        Self::validated(UrnKind::Linear { a, b })
    }

    /// Polynomial urn with ascending-degree coefficients; must map [0,1]
    /// into [0,1].
    pub fn polynomial(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::validation("polynomial urn needs coefficients".into()));
        }
        Self::validated(UrnKind::Polynomial { coefficients })
    }

    /// The Polya-Eggenberger identity urn pi(s) = s.
    pub fn identity() -> Self {
        Self::validated(UrnKind::Polynomial {
            coefficients: vec![0.0, 1.0],
        })
        .expect("identity urn is valid")
    }

    /// Market-share sampling urn: z odd adopters, minority chosen with
    /// probability p.
    pub fn majority_sample(z: u32, p: f64) -> Result<Self> {
        if z == 0 || z % 2 == 0 {
            return Err(Error::validation(format!("majority urn needs odd z >= 1, got {z}")));
        }
        if z > 1001 {
            return Err(Error::validation(format!("majority sample size {z} is unreasonably large")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::validation(format!("majority urn needs p in [0,1], got {p}")));
        }
        Self::validated(UrnKind::Majority { z, p })
    }

    /// Piecewise closed-form urn; pieces must tile [0,1] in order.
    pub fn piecewise(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::validation("piecewise urn needs pieces".into()));
        }
        if (pieces[0].lo - 0.0).abs() > 1e-12 || (pieces[pieces.len() - 1].hi - 1.0).abs() > 1e-12 {
            return Err(Error::validation("piecewise pieces must cover [0,1]".into()));
        }
        for w in pieces.windows(2) {
            if (w[0].hi - w[1].lo).abs() > 1e-12 {
                return Err(Error::validation(format!(
                    "piecewise pieces must be contiguous (gap at {})",
                    w[0].hi
                )));
            }
        }
        for p in &pieces {
            if p.lo >= p.hi {
                return Err(Error::validation(format!(
                    "piece [{}, {}] has non-positive width",
                    p.lo, p.hi
                )));
            }
        }
        Self::validated(UrnKind::Piecewise { pieces })
    }

    /// Tabulated urn from sample points (m_i, pi_i); endpoints at m = 0 and
    /// m = 1 are required.
    pub fn from_table(points: Vec<(f64, f64)>, rule: Interpolation) -> Result<Self> {
        Self::table_impl(points, rule, false)
    }

    /// `from_table` with constant extension when the endpoints are missing.
    pub fn from_table_extended(points: Vec<(f64, f64)>, rule: Interpolation) -> Result<Self> {
        Self::table_impl(points, rule, true)
    }

    fn table_impl(mut points: Vec<(f64, f64)>, rule: Interpolation, extend: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::validation(format!(
                "tabulated urn needs at least 2 points, got {}",
                points.len()
            )));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::validation(format!(
                    "tabulated abscissae must be strictly increasing (at m = {})",
                    w[1].0
                )));
            }
        }
        for &(m, v) in &points {
            if !(-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&m) {
                return Err(Error::validation(format!("tabulated abscissa {m} outside [0,1]")));
            }
            if !(-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&v) {
                return Err(Error::validation(format!("tabulated value {v} outside [0,1]")));
            }
        }
        let missing_lo = points[0].0 > DOMAIN_TOL;
        let missing_hi = points[points.len() - 1].0 < 1.0 - DOMAIN_TOL;
        if (missing_lo || missing_hi) && !extend {
            return Err(Error::validation(
                "tabulated urn must include endpoints m = 0 and m = 1 \
                 (or use the extend-by-constant option)"
                    .into(),
            ));
        }
        if missing_lo {
            points.insert(0, (0.0, points[0].1));
        }
        if missing_hi {
            points.push((1.0, points[points.len() - 1].1));
        }
        Self::validated(UrnKind::Tabulated { points, rule })
    }

    /// Attach declared regularity metadata; runs the grid falsifier and
    /// rejects metadata it can refute.
    pub fn with_regularity(mut self, modulus_class: ModulusClass) -> Result<Self> {
        self.regularity = RegularityInfo {
            modulus_class,
            continuity_checked: false,
        };
        self.check_modulus()?;
        self.regularity.continuity_checked = true;
        Ok(self)
    }

    pub fn kind(&self) -> &UrnKind {
        &self.kind
    }

    pub fn regularity(&self) -> &RegularityInfo {
        &self.regularity
    }

    /// Evaluate pi(s); `s` must lie in [0,1] up to tolerance 1e-12.
    pub fn evaluate(&self, s: f64) -> Result<f64> {
        if !s.is_finite() || s < -DOMAIN_TOL || s > 1.0 + DOMAIN_TOL {
            return Err(Error::domain(format!("urn argument {s} outside [0,1]")));
        }
        Ok(self.value(s))
    }

    /// Infallible evaluation used by numeric kernels; clamps the argument
    /// into [0,1] and the result into [0,1].
    pub fn value(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        let v = match &self.kind {
            UrnKind::Constant { p } => *p,
            UrnKind::Linear { a, b } => {
                let t = a + b * s;
                if t >= 1.0 {
                    1.0
                } else if t <= 0.0 {
                    0.0
                } else {
                    t
                }
            }
            UrnKind::Polynomial { coefficients } => horner(coefficients, s),
            UrnKind::Majority { z, p } => {
                let sigma = majority_prob(*z, s);
                (1.0 - p) * sigma + p * (1.0 - sigma)
            }
            UrnKind::Piecewise { pieces } => {
                let idx = pieces
                    .partition_point(|p| p.hi < s)
                    .min(pieces.len() - 1);
                let piece = &pieces[idx];
                match &piece.form {
                    PieceForm::Poly(c) => horner(c, s),
                    PieceForm::PolySqrt {
                        poly,
                        coeff,
                        radicand,
                    } => horner(poly, s) + coeff * horner(radicand, s).max(0.0).sqrt(),
                    PieceForm::Urn(u) => u.value(s),
                }
            }
            UrnKind::Tabulated { points, rule } => match rule {
                Interpolation::Linear => {
                    let i = points
                        .partition_point(|&(m, _)| m <= s)
                        .clamp(1, points.len() - 1);
                    let (m0, v0) = points[i - 1];
                    let (m1, v1) = points[i];
                    v0 + (v1 - v0) * (s - m0) / (m1 - m0)
                }
                Interpolation::MonotoneCubic => {
                    let d = self.pchip_cache.get_or_init(|| pchip_derivatives(points));
                    let i = points
                        .partition_point(|&(m, _)| m <= s)
                        .clamp(1, points.len() - 1);
                    let (m0, v0) = points[i - 1];
                    let (m1, v1) = points[i];
                    let h = m1 - m0;
                    let t = (s - m0) / h;
                    let t2 = t * t;
                    let t3 = t2 * t;
                    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
                    let h10 = t3 - 2.0 * t2 + t;
                    let h01 = -2.0 * t3 + 3.0 * t2;
                    let h11 = t3 - t2;
                    h00 * v0 + h10 * h * d[i - 1] + h01 * v1 + h11 * h * d[i]
                }
            },
        };
        v.clamp(0.0, 1.0)
    }

    /// Complement 1 - pi(s).
    pub fn co_value(&self, s: f64) -> f64 {
        1.0 - self.value(s)
    }

    fn validate_range(&self) -> Result<()> {
        // kinds other than these are in range by construction
        if !matches!(
            self.kind,
            UrnKind::Polynomial { .. } | UrnKind::Piecewise { .. }
        ) {
            return Ok(());
        }
        const N: usize = 2001;
        for i in 0..=N {
            let s = i as f64 / N as f64;
            let v = self.raw_unclamped(s);
            if !(-1e-9..=1.0 + 1e-9).contains(&v) {
                return Err(Error::validation(format!(
                    "urn function leaves [0,1] at s = {s} (value {v})"
                )));
            }
        }
        Ok(())
    }

    fn raw_unclamped(&self, s: f64) -> f64 {
        match &self.kind {
            UrnKind::Polynomial { coefficients } => horner(coefficients, s),
            UrnKind::Piecewise { pieces } => {
                let idx = pieces.partition_point(|p| p.hi < s).min(pieces.len() - 1);
                match &pieces[idx].form {
                    PieceForm::Poly(c) => horner(c, s),
                    PieceForm::PolySqrt {
                        poly,
                        coeff,
                        radicand,
                    } => horner(poly, s) + coeff * horner(radicand, s).max(0.0).sqrt(),
                    PieceForm::Urn(u) => u.value(s),
                }
            }
            _ => self.value(s),
        }
    }

    /// Grid falsifier for the declared modulus: scans at resolution 1e-4 and
    /// rejects violations beyond a factor of 2.
    pub fn check_modulus(&self) -> Result<()> {
        let bound: Box<dyn Fn(f64) -> f64> = match self.regularity.modulus_class {
            ModulusClass::Lipschitz(l) => Box::new(move |h: f64| l * h),
            ModulusClass::Hoelder { exponent, constant } => {
                if !(0.0..=1.0).contains(&exponent) || exponent == 0.0 {
                    return Err(Error::validation(format!(
                        "Hoelder exponent must lie in (0,1], got {exponent}"
                    )));
                }
                Box::new(move |h: f64| constant * h.powf(exponent))
            }
            ModulusClass::DeclaredU | ModulusClass::Unknown => return Ok(()),
        };
        let h = 1e-4;
        let n = 10_000;
        for i in 0..n {
            let s = i as f64 * h;
            let diff = (self.value(s + h) - self.value(s)).abs();
            if diff > 2.0 * bound(h) + 1e-14 {
                return Err(Error::validation(format!(
                    "declared modulus falsified at s = {s}: |pi(s+h)-pi(s)| = {diff:.3e} \
                     exceeds twice the declared bound {:.3e}",
                    bound(h)
                )));
            }
        }
        Ok(())
    }
}

/// Parse an urn specification document: either a JSON object following the
/// external-interface schema or one of the compact shorthands
/// (`identity`, `constant:p`, `linear:a,b`, `majority<z>`, `majority:z,p`,
/// `arcsin`, `subtractive`).
pub fn from_spec(text: &str) -> Result<UrnFunction> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::parse("empty urn specification".into()));
    }
    if trimmed.starts_with('{') {
        let normalized = quote_bare_keys(trimmed);
        let doc: UrnSpecDoc = serde_json::from_str(&normalized)
            .map_err(|e| Error::parse(format!("urn spec JSON: {e}")))?;
        return doc.build();
    }
    parse_shorthand(trimmed)
}

fn parse_shorthand(s: &str) -> Result<UrnFunction> {
    let (head, rest) = match s.split_once(':') {
        Some((h, r)) => (h.trim(), Some(r.trim())),
        None => (s, None),
    };
    let parse_nums = |r: &str| -> Result<Vec<f64>> {
        r.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::parse(format!("bad number `{t}` in urn shorthand")))
            })
            .collect()
    };
    match head {
        "identity" | "polya" => Ok(UrnFunction::identity()),
        "constant" => {
            let r = rest.ok_or_else(|| Error::parse("constant shorthand needs `constant:p`".into()))?;
            let v = parse_nums(r)?;
            if v.len() != 1 {
                return Err(Error::parse("constant shorthand takes one number".into()));
            }
            UrnFunction::constant(v[0])
        }
        "linear" => {
            let r = rest.ok_or_else(|| Error::parse("linear shorthand needs `linear:a,b`".into()))?;
            let v = parse_nums(r)?;
            if v.len() != 2 {
                return Err(Error::parse("linear shorthand takes two numbers".into()));
            }
            UrnFunction::linear(v[0], v[1])
        }
        "arcsin" => Ok(crate::catalog::arcsin_example()),
        "subtractive" => Ok(crate::catalog::subtractive_example()),
        _ if head.starts_with("majority") => {
            if let Some(r) = rest {
                let v = parse_nums(r)?;
                match v.as_slice() {
                    [z] => UrnFunction::majority_sample(*z as u32, 0.0),
                    [z, p] => UrnFunction::majority_sample(*z as u32, *p),
                    _ => Err(Error::parse("majority shorthand takes `majority:z[,p]`".into())),
                }
            } else {
                let digits = &head["majority".len()..];
                let z: u32 = digits
                    .parse()
                    .map_err(|_| Error::parse(format!("bad majority shorthand `{s}`")))?;
                UrnFunction::majority_sample(z, 0.0)
            }
        }
        _ => Err(Error::parse(format!("unknown urn shorthand `{s}`"))),
    }
}

/// Quote bare identifiers so that relaxed specs like
/// `{kind: linear, a: 0.3, b: 0.2}` become valid JSON.
fn quote_bare_keys(input: &str) -> String {
    let mut out = String::with_capacity(input.len() + 16);
    let mut chars = input.chars().peekable();
    let mut in_string = false;
    while let Some(c) = chars.next() {
        if in_string {
            out.push(c);
            if c == '\\' {
                if let Some(n) = chars.next() {
                    out.push(n);
                }
            } else if c == '"' {
                in_string = false;
            }
            continue;
        }
        match c {
            '"' => {
                in_string = true;
                out.push(c);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                word.push(c);
                while let Some(&n) = chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' || n == '-' {
                        word.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "true" | "false" | "null" => out.push_str(&word),
                    _ => {
                        out.push('"');
                        out.push_str(&word);
                        out.push('"');
                    }
                }
            }
            _ => out.push(c),
        }
    }
    out
}

/// JSON document schema for urn specifications.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum UrnSpecDoc {
    Constant {
        p: f64,
    },
    Linear {
        a: f64,
        b: f64,
    },
    Polynomial {
        coefficients: Vec<f64>,
    },
    Majority {
        z: u32,
        #[serde(default)]
        p: f64,
    },
    Piecewise {
        pieces: Vec<PieceDoc>,
    },
    Tabulated {
        points: Vec<(f64, f64)>,
        #[serde(default)]
        rule: Interpolation,
        #[serde(default)]
        extend: bool,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceDoc {
    lo: f64,
    hi: f64,
    #[serde(default)]
    poly: Option<Vec<f64>>,
    #[serde(default)]
    sqrt: Option<SqrtDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SqrtDoc {
    coeff: f64,
    radicand: Vec<f64>,
}

impl UrnSpecDoc {
    fn build(self) -> Result<UrnFunction> {
        match self {
            UrnSpecDoc::Constant { p } => UrnFunction::constant(p),
            UrnSpecDoc::Linear { a, b } => UrnFunction::linear(a, b),
            UrnSpecDoc::Polynomial { coefficients } => UrnFunction::polynomial(coefficients),
            UrnSpecDoc::Majority { z, p } => UrnFunction::majority_sample(z, p),
            UrnSpecDoc::Piecewise { pieces } => {
                let pieces = pieces
                    .into_iter()
                    .map(|p| {
                        let form = match (p.poly, p.sqrt) {
                            (Some(poly), None) => PieceForm::Poly(poly),
                            (poly, Some(sq)) => PieceForm::PolySqrt {
                                poly: poly.unwrap_or_default(),
                                coeff: sq.coeff,
                                radicand: sq.radicand,
                            },
                            (None, None) => {
                                return Err(Error::parse(
                                    "piece needs a `poly` and/or `sqrt` form".into(),
                                ))
                            }
                        };
                        Ok(Piece {
                            lo: p.lo,
                            hi: p.hi,
                            form,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                UrnFunction::piecewise(pieces)
            }
            UrnSpecDoc::Tabulated {
                points,
                rule,
                extend,
            } => {
                if extend {
                    UrnFunction::from_table_extended(points, rule)
                } else {
                    UrnFunction::from_table(points, rule)
                }
            }
        }
    }
}
