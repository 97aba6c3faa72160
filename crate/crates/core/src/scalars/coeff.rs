use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::gauss::{parse_decimal, GaussQ};
use super::quadratic::{components, QContext, RootKind, ScalarQ};
use super::ScalarError;

/// Magnitude below which float coefficients are dropped from polynomials.
pub const FLOAT_PRUNE: f64 = 1e-13;

/// Tolerance used to decide `|q| = 1` or `|q| < 1` in float mode.
pub const FLOAT_MODULUS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    /// IEEE double precision.
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

/// Which square root stands for `(1 − q²)^{1/2}` when `q` is complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootConvention {
    /// `(1 − |q|²)^{1/2}`, real and nonnegative.
    ModulusSquared,
    /// Principal branch of `(1 − q²)^{1/2}`.
    Literal,
}

/// How a coefficient prints inside a polynomial term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffText {
    One,
    MinusOne,
    /// A single signed atom such as `q^2` or `3/4 r`.
    Atom {
        negative: bool,
        body: String,
    },
    /// Already parenthesized, sign included.
    Compound(String),
}

/// Scalar coefficients of polynomials and matrices.
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is exact (zero tests are decisions, not estimates).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Zero test used when pruning polynomial terms.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
    fn render(&self) -> CoeffText;
}

impl Coeff for ScalarQ {
    const EXACT: bool = true;

    fn zero() -> Self {
        ScalarQ::ratio(0, 1)
    }
    fn one() -> Self {
        ScalarQ::ratio(1, 1)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        ScalarQ::ratio(num, den)
    }
    fn is_zero(&self) -> bool {
        ScalarQ::is_zero(self)
    }
    fn conj(&self) -> Self {
        ScalarQ::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        ScalarQ::inv(self).ok()
    }
    fn to_complex(&self) -> Complex64 {
        ScalarQ::to_complex(self)
    }
    fn render(&self) -> CoeffText {
        if self.is_one() {
            return CoeffText::One;
        }
        if ScalarQ::neg(self).is_one() {
            return CoeffText::MinusOne;
        }
        if let Some((negative, body)) = self.recognize_q_monomial() {
            return CoeffText::Atom { negative, body };
        }
        let parts = components(self);
        let atom = |v: &BigRational, suffix: &str| {
            let mag = v.abs();
            match (suffix.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => suffix.to_string(),
                (false, false) => format!("{mag} {suffix}"),
            }
        };
        if parts.len() == 1 {
            let (v, suffix) = &parts[0];
            return CoeffText::Atom { negative: v.is_negative(), body: atom(v, suffix) };
        }
        let mut s = String::from("(");
        for (k, (v, suffix)) in parts.iter().enumerate() {
            match (k, v.is_negative()) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&atom(v, suffix));
        }
        s.push(')');
        CoeffText::Compound(s)
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn is_negligible(&self) -> bool {
        self.norm() <= FLOAT_PRUNE
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        (!Coeff::is_zero(self)).then(|| Complex64::new(1.0, 0.0) / *self)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn render(&self) -> CoeffText {
        let (re, im) = (self.re, self.im);
        if im == 0.0 {
            if re == 1.0 {
                return CoeffText::One;
            }
            if re == -1.0 {
                return CoeffText::MinusOne;
            }
            return CoeffText::Atom { negative: re < 0.0, body: format!("{}", re.abs()) };
        }
        if re == 0.0 {
            let body = if im.abs() == 1.0 { "i".to_string() } else { format!("{} i", im.abs()) };
            return CoeffText::Atom { negative: im < 0.0, body };
        }
        let sign = if im < 0.0 { '-' } else { '+' };
        CoeffText::Compound(format!("({re} {sign} {} i)", im.abs()))
    }
}

/// A scalar field fixed by a deformation parameter `q`.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Coeff;

    fn mode(&self) -> ScalarMode;
    fn q(&self) -> Self::Elem;
    fn qbar(&self) -> Self::Elem {
        self.q().conj()
    }
    /// `(1 − q²)^{1/2}` (see [`RootConvention`] for complex `q`).
    fn r(&self) -> Result<Self::Elem, ScalarError>;
    fn rinv(&self) -> Result<Self::Elem, ScalarError> {
        self.r()?.inv().ok_or(ScalarError::DivisionByZero)
    }
    fn imag_unit(&self) -> Self::Elem;
    fn gauss(&self, g: &GaussQ) -> Self::Elem;
    /// Parses a numeric literal (`3`, `3/5`, `0.9`).
    fn literal(&self, text: &str) -> Result<Self::Elem, ScalarError>;
    /// Nonnegative square root of a real nonnegative element.
    fn sqrt_nonneg(&self, x: &Self::Elem) -> Result<Self::Elem, ScalarError>;
    /// `|q|² − 1` classified as below (-1), on (0) or above (1) the unit circle.
    fn q_modulus_class(&self) -> i8;
    fn describe_q(&self) -> String;
    /// Imports a floating-point value; exact fields refuse.
    fn from_float(&self, z: Complex64) -> Result<Self::Elem, ScalarError>;
}

/// Exact arithmetic in ℚ(i)(r).
#[derive(Clone, Debug)]
pub struct ExactField {
    ctx: Arc<QContext>,
}

impl ExactField {
    pub fn new(q: GaussQ) -> Self {
        ExactField { ctx: QContext::new(q) }
    }

    pub fn context(&self) -> &Arc<QContext> {
        &self.ctx
    }

    pub fn q_gauss(&self) -> &GaussQ {
        self.ctx.q()
    }

    /// The element `a + b·r`.
    pub fn make(&self, a: GaussQ, b: GaussQ) -> Result<ScalarQ, ScalarError> {
        ScalarQ::make(a, b, &self.ctx)
    }
}

impl Field for ExactField {
    type Elem = ScalarQ;

    fn mode(&self) -> ScalarMode {
        ScalarMode::Exact
    }

    fn q(&self) -> ScalarQ {
        ScalarQ::make(self.ctx.q().clone(), GaussQ::zero(), &self.ctx).expect("rational element")
    }

    fn r(&self) -> Result<ScalarQ, ScalarError> {
        match self.ctx.root() {
            RootKind::Unavailable => Err(ScalarError::RootUnavailable { q: self.ctx.q().to_string() }),
            _ => ScalarQ::make(GaussQ::zero(), GaussQ::one(), &self.ctx),
        }
    }

    fn imag_unit(&self) -> ScalarQ {
        self.gauss(&GaussQ::i())
    }

    fn gauss(&self, g: &GaussQ) -> ScalarQ {
        ScalarQ::make(g.clone(), GaussQ::zero(), &self.ctx).expect("rational element")
    }

    fn literal(&self, text: &str) -> Result<ScalarQ, ScalarError> {
        let v = parse_rational_literal(text)?;
        Ok(self.gauss(&GaussQ::real(v)))
    }

    fn sqrt_nonneg(&self, x: &ScalarQ) -> Result<ScalarQ, ScalarError> {
        let g = x
            .as_gauss()
            .filter(|g| g.is_real() && !g.re.is_negative())
            .ok_or_else(|| ScalarError::NotRepresentable(format!("square root of {x} is not a nonnegative rational")))?;
        let root = g.sqrt_exact().ok_or_else(|| ScalarError::NotRepresentable(format!("{g} is not the square of a rational")))?;
        Ok(self.gauss(&root))
    }

    fn q_modulus_class(&self) -> i8 {
        let n = self.ctx.q().norm_sqr();
        match n.cmp(&BigRational::one()) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }

    fn describe_q(&self) -> String {
        self.ctx.q().to_string()
    }

    fn from_float(&self, z: Complex64) -> Result<ScalarQ, ScalarError> {
        Err(ScalarError::NotRepresentable(format!("floating-point value {z} in exact mode")))
    }
}

/// Double-precision complex arithmetic.
#[derive(Clone, Debug)]
pub struct FloatField {
    q: Complex64,
    convention: RootConvention,
}

impl FloatField {
    pub fn new(q: Complex64) -> Self {
        FloatField { q, convention: RootConvention::ModulusSquared }
    }

    pub fn with_convention(q: Complex64, convention: RootConvention) -> Self {
        FloatField { q, convention }
    }

    pub fn convention(&self) -> RootConvention {
        self.convention
    }

    pub fn q_value(&self) -> Complex64 {
        self.q
    }
}

impl Field for FloatField {
    type Elem = Complex64;

    fn mode(&self) -> ScalarMode {
        ScalarMode::Float
    }

    fn q(&self) -> Complex64 {
        self.q
    }

    fn r(&self) -> Result<Complex64, ScalarError> {
        Ok(match self.convention {
            RootConvention::ModulusSquared => Complex64::new((1.0 - self.q.norm_sqr()).max(0.0).sqrt(), 0.0),
            RootConvention::Literal => (Complex64::new(1.0, 0.0) - self.q * self.q).sqrt(),
        })
    }

    fn imag_unit(&self) -> Complex64 {
        Complex64::new(0.0, 1.0)
    }

    fn gauss(&self, g: &GaussQ) -> Complex64 {
        g.to_complex()
    }

    fn literal(&self, text: &str) -> Result<Complex64, ScalarError> {
        let v = parse_rational_literal(text)?;
        Ok(GaussQ::real(v).to_complex())
    }

    fn sqrt_nonneg(&self, x: &Complex64) -> Result<Complex64, ScalarError> {
        if x.im.abs() > FLOAT_MODULUS_TOL || x.re < -FLOAT_MODULUS_TOL {
            return Err(ScalarError::NotRepresentable(format!("{x} is not a nonnegative real")));
        }
        Ok(Complex64::new(x.re.max(0.0).sqrt(), 0.0))
    }

    fn q_modulus_class(&self) -> i8 {
        let n = self.q.norm_sqr() - 1.0;
        if n.abs() <= FLOAT_MODULUS_TOL {
            0
        } else if n < 0.0 {
            -1
        } else {
            1
        }
    }

    fn describe_q(&self) -> String {
        if self.q.im == 0.0 {
            format!("{}", self.q.re)
        } else {
            format!("{} + {} i", self.q.re, self.q.im)
        }
    }

    fn from_float(&self, z: Complex64) -> Result<Complex64, ScalarError> {
        Ok(z)
    }
}

fn parse_rational_literal(text: &str) -> Result<BigRational, ScalarError> {
    let bad = || ScalarError::Parse(format!("bad numeric literal {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n = parse_decimal(n).ok_or_else(bad)?;
            let d = parse_decimal(d).ok_or_else(bad)?;
            if d.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            Ok(n / d)
        }
        None => parse_decimal(text).ok_or_else(bad),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_field_roots() {
        let f = ExactField::new(GaussQ::from_ratio(1, 2));
        let r = f.r().unwrap();
        let rinv = f.rinv().unwrap();
        assert_eq!(rinv, f.make(GaussQ::zero(), GaussQ::from_ratio(4, 3)).unwrap());
        assert!((r * rinv).is_one());
    }

    #[test]
    fn float_conventions_agree_for_real_q() {
        let a = FloatField::with_convention(Complex64::new(0.6, 0.0), RootConvention::Literal);
        let b = FloatField::new(Complex64::new(0.6, 0.0));
        assert!((a.r().unwrap() - b.r().unwrap()).norm() < 1e-15);
        let c = FloatField::with_convention(Complex64::new(0.3, 0.4), RootConvention::Literal);
        let d = FloatField::new(Complex64::new(0.3, 0.4));
        assert!((c.r().unwrap() - d.r().unwrap()).norm() > 1e-3);
    }

    #[test]
    fn renders_compound_coefficients() {
        let f = ExactField::new(GaussQ::from_ratio(1, 2));
        let x = f.make(GaussQ::from_ratio(1, 3), GaussQ::from_ratio(-3, 7)).unwrap();
        assert_eq!(x.render(), CoeffText::Compound("(1/3 - 3/7 r)".into()));
        let y = f.gauss(&GaussQ::from_parts((0, 1), (-2, 3)));
        assert_eq!(y.render(), CoeffText::Atom { negative: true, body: "2/3 i".into() });
        assert_eq!(Complex64::new(0.5, -0.25).render(), CoeffText::Compound("(0.5 - 0.25 i)".into()));
    }

    #[test]
    fn modulus_classes() {
        assert_eq!(ExactField::new("(3+4i)/5".parse().unwrap()).q_modulus_class(), 0);
        assert_eq!(ExactField::new(GaussQ::from_ratio(9, 10)).q_modulus_class(), -1);
        assert_eq!(FloatField::new(Complex64::new(0.6, 0.8)).q_modulus_class(), 0);
    }
}
