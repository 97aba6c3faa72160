use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::GaussQ;
use super::ScalarError;

/// How `r = (1 − q²)^{1/2}` sits relative to ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootKind {
    /// `1 − q²` is a perfect square; `r` is folded into the rational part.
    Rational(GaussQ),
    /// Real `q` with `1 − q²` a positive non-square: `r` is a genuine new element.
    Irrational,
    /// Non-real `q`, or `1 − q² < 0`: exact `r` is not offered.
    Unavailable,
}

/// The fixed deformation parameter shared by all scalars of a session.
#[derive(Debug, PartialEq, Eq)]
pub struct QContext {
    q: GaussQ,
    one_minus_q2: GaussQ,
    root: RootKind,
}

impl QContext {
    pub fn new(q: GaussQ) -> Arc<QContext> {
        let one_minus_q2 = &GaussQ::one() - &(&q * &q);
        let root = if !q.is_real() || one_minus_q2.re.is_negative() {
            RootKind::Unavailable
        } else {
            match one_minus_q2.sqrt_exact() {
                Some(root) => RootKind::Rational(root),
                None => RootKind::Irrational,
            }
        };
        Arc::new(QContext { q, one_minus_q2, root })
    }

    pub fn q(&self) -> &GaussQ {
        &self.q
    }

    pub fn one_minus_q2(&self) -> &GaussQ {
        &self.one_minus_q2
    }

    pub fn root(&self) -> &RootKind {
        &self.root
    }
}

/// An element `a + b·r` of ℚ(i)(r), `r² = 1 − q²`.
///
/// Scalars built from plain Gaussian rationals carry no context and combine
/// freely with any other scalar. Scalars tied to a `q` remember it; combining
/// two scalars tied to different `q` is an error (the std operators panic,
/// the `checked_*` methods return [`ScalarError::ContextMismatch`]).
#[derive(Clone, Debug)]
pub struct ScalarQ {
    a: GaussQ,
    b: GaussQ,
    ctx: Option<Arc<QContext>>,
}

impl ScalarQ {
    /// Builds `a + b·r` in the context of `ctx`.
    pub fn make(a: GaussQ, b: GaussQ, ctx: &Arc<QContext>) -> Result<Self, ScalarError> {
        let s = match ctx.root() {
            RootKind::Rational(root) => ScalarQ { a: &a + &(&b * root), b: GaussQ::zero(), ctx: Some(ctx.clone()) },
            RootKind::Irrational => ScalarQ { a, b, ctx: Some(ctx.clone()) },
            RootKind::Unavailable if b.is_zero() => ScalarQ { a, b, ctx: Some(ctx.clone()) },
            RootKind::Unavailable => return Err(ScalarError::RootUnavailable { q: ctx.q().to_string() }),
        };
        Ok(s)
    }

    /// A context-free Gaussian rational.
    pub fn gauss(a: GaussQ) -> Self {
        ScalarQ { a, b: GaussQ::zero(), ctx: None }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ScalarQ::gauss(GaussQ::from_ratio(num, den))
    }

    pub fn rational_part(&self) -> &GaussQ {
        &self.a
    }

    pub fn root_part(&self) -> &GaussQ {
        &self.b
    }

    pub fn context(&self) -> Option<&Arc<QContext>> {
        self.ctx.as_ref()
    }

    /// Attaches `ctx` to a context-free scalar.
    pub fn in_context(mut self, ctx: &Arc<QContext>) -> Result<Self, ScalarError> {
        let merged = merge(&self.ctx, &Some(ctx.clone()))?;
        self.ctx = merged;
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// The value as a Gaussian rational, when `b = 0`.
    pub fn as_gauss(&self) -> Option<&GaussQ> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ScalarError> {
        let ctx = merge(&self.ctx, &o.ctx)?;
        Ok(ScalarQ { a: &self.a + &o.a, b: &self.b + &o.b, ctx })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ScalarError> {
        let ctx = merge(&self.ctx, &o.ctx)?;
        Ok(ScalarQ { a: &self.a - &o.a, b: &self.b - &o.b, ctx })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ScalarError> {
        let ctx = merge(&self.ctx, &o.ctx)?;
        let mut a = &self.a * &o.a;
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        let bb = &self.b * &o.b;
        if !bb.is_zero() {
            // b ≠ 0 only ever happens inside an Irrational context.
            let d = ctx.as_ref().expect("root part without context").one_minus_q2();
            a = &a + &(&bb * d);
        }
        Ok(ScalarQ { a, b, ctx })
    }

    pub fn neg(&self) -> Self {
        ScalarQ { a: -&self.a, b: -&self.b, ctx: self.ctx.clone() }
    }

    /// `conj(a + b·r) = ā + b̄·r`; `r` is real whenever `b` can be nonzero.
    pub fn conj(&self) -> Self {
        ScalarQ { a: self.a.conj(), b: self.b.conj(), ctx: self.ctx.clone() }
    }

    /// `(a + b·r)⁻¹ = (a − b·r)/(a² − b²(1 − q²))`.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.b.is_zero() {
            let a = self.a.inv().ok_or(ScalarError::DivisionByZero)?;
            return Ok(ScalarQ { a, b: GaussQ::zero(), ctx: self.ctx.clone() });
        }
        let d = self.ctx.as_ref().expect("root part without context").one_minus_q2();
        let norm = &(&self.a * &self.a) - &(&(&self.b * &self.b) * d);
        let n_inv = norm.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(ScalarQ { a: &self.a * &n_inv, b: -&(&self.b * &n_inv), ctx: self.ctx.clone() })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = ScalarQ { a: GaussQ::one(), b: GaussQ::zero(), ctx: self.ctx.clone() };
        for _ in 0..k {
            acc = acc.checked_mul(self).expect("same context");
        }
        acc
    }

    /// Float value, with `r` the nonnegative root of `1 − q²`.
    pub fn to_complex(&self) -> Complex64 {
        let a = self.a.to_complex();
        if self.b.is_zero() {
            return a;
        }
        let d = self.ctx.as_ref().expect("root part without context").one_minus_q2();
        let root = super::gauss::rational_to_f64(&d.re).sqrt();
        a + self.b.to_complex() * root
    }

    /// Symbolic rendering as ±q^k, ±qbar^k, ±r q^k or ±rinv q^k when the
    /// value matches one of those for a small k.
    pub(crate) fn recognize_q_monomial(&self) -> Option<(bool, String)> {
        let ctx = self.ctx.as_ref()?;
        let q = ctx.q();
        if q.is_zero() || (q.is_real() && q.norm_sqr().is_one()) {
            return None;
        }
        if self.is_one() || self.neg().is_one() {
            return None;
        }
        let neg = self.neg();
        let q_s = ScalarQ { a: q.clone(), b: GaussQ::zero(), ctx: Some(ctx.clone()) };
        let mut bases: Vec<(&str, ScalarQ)> = vec![("", ScalarQ { a: GaussQ::one(), b: GaussQ::zero(), ctx: Some(ctx.clone()) })];
        if matches!(ctx.root(), RootKind::Irrational) {
            let r = ScalarQ { a: GaussQ::zero(), b: GaussQ::one(), ctx: Some(ctx.clone()) };
            let rinv = r.inv().ok()?;
            bases.push(("r", r));
            bases.push(("rinv", rinv));
        }
        let mut powers = vec![];
        let mut p = q_s.clone();
        for k in 1..=24u32 {
            powers.push((k, p.clone()));
            p = p.checked_mul(&q_s).ok()?;
        }
        let conj_powers: Vec<(u32, ScalarQ)> =
            if q.is_real() { vec![] } else { powers.iter().map(|(k, p)| (*k, p.conj())).collect() };
        let fmt_pow = |name: &str, k: u32| if k == 1 { name.to_string() } else { format!("{name}^{k}") };
        for (prefix, base) in &bases {
            if !prefix.is_empty() {
                if base == self {
                    return Some((false, prefix.to_string()));
                }
                if base == &neg {
                    return Some((true, prefix.to_string()));
                }
            }
            for (name, table) in [("q", &powers), ("qbar", &conj_powers)] {
                for (k, p) in table.iter() {
                    let v = base.checked_mul(p).ok()?;
                    let body = if prefix.is_empty() { fmt_pow(name, *k) } else { format!("{prefix} {}", fmt_pow(name, *k)) };
                    if &v == self {
                        return Some((false, body));
                    }
                    if v == neg {
                        return Some((true, body));
                    }
                }
            }
        }
        None
    }
}

fn merge(x: &Option<Arc<QContext>>, y: &Option<Arc<QContext>>) -> Result<Option<Arc<QContext>>, ScalarError> {
    match (x, y) {
        (Some(a), Some(b)) => {
            if Arc::ptr_eq(a, b) || a.q() == b.q() {
                Ok(Some(a.clone()))
            } else {
                Err(ScalarError::ContextMismatch { left: a.q().to_string(), right: b.q().to_string() })
            }
        }
        (Some(a), None) | (None, Some(a)) => Ok(Some(a.clone())),
        (None, None) => Ok(None),
    }
}

impl PartialEq for ScalarQ {
    fn eq(&self, o: &Self) -> bool {
        if self.a != o.a || self.b != o.b {
            return false;
        }
        if self.b.is_zero() {
            return true;
        }
        match (&self.ctx, &o.ctx) {
            (Some(x), Some(y)) => x.q() == y.q(),
            _ => false,
        }
    }
}

impl Add for ScalarQ {
    type Output = ScalarQ;
    fn add(self, o: ScalarQ) -> ScalarQ {
        self.checked_add(&o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for ScalarQ {
    type Output = ScalarQ;
    fn sub(self, o: ScalarQ) -> ScalarQ {
        self.checked_sub(&o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for ScalarQ {
    type Output = ScalarQ;
    fn mul(self, o: ScalarQ) -> ScalarQ {
        self.checked_mul(&o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        ScalarQ::neg(&self)
    }
}

impl fmt::Display for ScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({}) r", self.b)
        } else {
            write!(f, "{} + ({}) r", self.a, self.b)
        }
    }
}

/// Numeric components `(value, suffix)` of a scalar, in printing order.
pub(crate) fn components(s: &ScalarQ) -> Vec<(BigRational, &'static str)> {
    let mut out = vec![];
    for (v, suffix) in [(&s.a.re, ""), (&s.a.im, "i"), (&s.b.re, "r"), (&s.b.im, "i r")] {
        if !v.is_zero() {
            out.push((v.clone(), suffix));
        }
    }
    out
}
