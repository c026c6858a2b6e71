use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rational_str, Arithmetic, Rational, Scalar};

/// Expression of one piece of an initial datum. Every variant has a closed
/// form primitive, so cell averages need no quadrature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Constant(#[serde(with = "rational_str")] Rational),
    /// `slope * x + intercept`
    Affine {
        #[serde(with = "rational_str")]
        slope: Rational,
        #[serde(with = "rational_str")]
        intercept: Rational,
    },
    /// `amplitude * sin(frequency * x + phase)`
    Sine { amplitude: f64, frequency: f64, phase: f64 },
    /// `amplitude * cos(cos_frequency * x) * sin(sin_frequency * x)`
    CosSin { amplitude: f64, cos_frequency: f64, sin_frequency: f64 },
}

impl Expr {
    pub fn is_trig(&self) -> bool {
        matches!(self, Expr::Sine { .. } | Expr::CosSin { .. })
    }

    pub fn eval<S: Scalar>(&self, x: &S) -> Result<S> {
        match self {
            Expr::Constant(c) => Ok(S::from_rational(c)),
            Expr::Affine { slope, intercept } => {
                Ok(S::from_rational(slope) * x.clone() + S::from_rational(intercept))
            }
            _ => {
                let x = trig_arg::<S>(x)?;
                let y = match *self {
                    Expr::Sine { amplitude, frequency, phase } => amplitude * (frequency * x + phase).sin(),
                    Expr::CosSin { amplitude, cos_frequency, sin_frequency } => {
                        amplitude * (cos_frequency * x).cos() * (sin_frequency * x).sin()
                    }
                    _ => unreachable!(),
                };
                S::from_f64(y).ok_or(Error::InvalidDatum("non-finite value".into()))
            }
        }
    }

    /// Integral over `[a, b]`.
    pub fn integral<S: Scalar>(&self, a: &S, b: &S) -> Result<S> {
        match self {
            Expr::Constant(c) => Ok(S::from_rational(c) * (b.clone() - a.clone())),
            Expr::Affine { slope, intercept } => {
                let mid = (a.clone() + b.clone()) / S::from_int(2);
                Ok((S::from_rational(slope) * mid + S::from_rational(intercept)) * (b.clone() - a.clone()))
            }
            _ => Ok(self.primitive(b)? - self.primitive(a)?),
        }
    }

    /// A primitive of the expression.
    pub fn primitive<S: Scalar>(&self, x: &S) -> Result<S> {
        match self {
            Expr::Constant(c) => Ok(S::from_rational(c) * x.clone()),
            Expr::Affine { slope, intercept } => {
                let two = S::from_int(2);
                Ok(S::from_rational(slope) * x.clone() * x.clone() / two + S::from_rational(intercept) * x.clone())
            }
            _ => {
                let x = trig_arg::<S>(x)?;
                let y = match *self {
                    Expr::Sine { amplitude, frequency, phase } => {
                        if frequency == 0.0 {
                            amplitude * phase.sin() * x
                        } else {
                            -amplitude * (frequency * x + phase).cos() / frequency
                        }
                    }
                    Expr::CosSin { amplitude, cos_frequency, sin_frequency } => {
                        // cos(a x) sin(b x) = (sin((b + a) x) + sin((b - a) x)) / 2
                        let neg_cos_over = |w: f64| if w == 0.0 { 0.0 } else { -(w * x).cos() / w };
                        amplitude / 2.0
                            * (neg_cos_over(sin_frequency + cos_frequency) + neg_cos_over(sin_frequency - cos_frequency))
                    }
                    _ => unreachable!(),
                };
                S::from_f64(y).ok_or(Error::InvalidDatum("non-finite primitive".into()))
            }
        }
    }
}

fn rint(n: i64) -> Rational {
    <Rational as Scalar>::from_int(n)
}

fn trig_arg<S: Scalar>(x: &S) -> Result<f64> {
    match S::ARITHMETIC {
        Arithmetic::Rational => Err(Error::TrigInExactMode),
        Arithmetic::Binary64 => Ok(x.to_f64()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    #[serde(with = "rational_str")]
    pub start: Rational,
    #[serde(with = "rational_str")]
    pub end: Rational,
    pub expr: Expr,
}

/// A function of one variable given by contiguous pieces `[start, end)`.
///
/// Periodic data repeat the pieces with the given period. Non-periodic data
/// may carry constant values below the first piece and above the last one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseDatum {
    pub pieces: Vec<Piece>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub period: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub below: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub above: Option<Rational>,
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<Ser: Serializer>(q: &Option<Rational>, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        match q {
            Some(q) => s.serialize_some(&q.exact_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        v.map(|v| <Rational as Scalar>::from_json(&v).map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl PiecewiseDatum {
    pub fn periodic(pieces: Vec<Piece>) -> Result<Self> {
        let period = match (pieces.first(), pieces.last()) {
            (Some(f), Some(l)) => l.end.clone() - f.start.clone(),
            _ => return Err(Error::InvalidDatum("no pieces".into())),
        };
        let d = PiecewiseDatum { pieces, period: Some(period), below: None, above: None };
        d.validate()?;
        Ok(d)
    }

    pub fn with_tails(pieces: Vec<Piece>, below: Rational, above: Rational) -> Result<Self> {
        let d = PiecewiseDatum { pieces, period: None, below: Some(below), above: Some(above) };
        d.validate()?;
        Ok(d)
    }

    pub fn constant(c: Rational) -> Self {
        let piece = Piece { start: rint(0), end: rint(1), expr: Expr::Constant(c) };
        PiecewiseDatum::periodic(vec![piece]).expect("unit piece")
    }

    /// `0` below `at`, `1` from `at` on.
    pub fn heaviside(at: Rational) -> Self {
        let end = at.clone() + rint(1);
        let piece = Piece { start: at, end, expr: Expr::Constant(rint(1)) };
        PiecewiseDatum::with_tails(vec![piece], rint(0), rint(1)).expect("unit piece")
    }

    pub fn validate(&self) -> Result<()> {
        if self.pieces.is_empty() {
            return Err(Error::InvalidDatum("no pieces".into()));
        }
        for p in &self.pieces {
            if p.start >= p.end {
                return Err(Error::InvalidDatum(format!("empty piece [{}, {})", p.start, p.end)));
            }
        }
        for w in self.pieces.windows(2) {
            if w[0].end != w[1].start {
                return Err(Error::InvalidDatum(format!("gap or overlap at {} / {}", w[0].end, w[1].start)));
            }
        }
        if let Some(period) = &self.period {
            let span = self.span_end().clone() - self.span_start().clone();
            if *period <= rint(0) || span != *period {
                return Err(Error::InvalidDatum(format!("pieces span {span}, period {period}")));
            }
            if self.below.is_some() || self.above.is_some() {
                return Err(Error::InvalidDatum("periodic data have no tails".into()));
            }
        }
        Ok(())
    }

    pub fn span_start(&self) -> &Rational {
        &self.pieces[0].start
    }

    pub fn span_end(&self) -> &Rational {
        &self.pieces[self.pieces.len() - 1].end
    }

    pub fn has_trig(&self) -> bool {
        self.pieces.iter().any(|p| p.expr.is_trig())
    }

    /// Fails early when the datum cannot be handled in the given mode.
    pub fn check_arithmetic(&self, mode: Arithmetic) -> Result<()> {
        if mode == Arithmetic::Rational && self.has_trig() {
            return Err(Error::TrigInExactMode);
        }
        Ok(())
    }

    /// Splits `x` into a whole number of periods and a point of the base span.
    fn reduce<S: Scalar>(&self, x: &S) -> Option<(i64, S)> {
        let period = S::from_rational(self.period.as_ref()?);
        let base = S::from_rational(self.span_start());
        let k = ((x.clone() - base.clone()) / period.clone()).floor_int();
        let mut r = x.clone() - period.clone() * S::from_int(k);
        // Guard against rounding pushing r onto the wrong side in binary64.
        let mut k = k;
        if r < base {
            r = r + period.clone();
            k -= 1;
        } else if r >= base.clone() + period.clone() {
            r = r - period;
            k += 1;
        }
        Some((k, r))
    }

    fn piece_at<S: Scalar>(&self, x: &S) -> Option<usize> {
        self.pieces.iter().position(|p| *x < S::from_rational(&p.end)).filter(|&i| {
            *x >= S::from_rational(&self.pieces[i].start)
        })
    }

    pub fn eval<S: Scalar>(&self, x: &S) -> Result<S> {
        let r = match self.reduce(x) {
            Some((_, r)) => r,
            None => {
                if *x < S::from_rational(self.span_start()) {
                    return self.below.as_ref().map(S::from_rational).ok_or(Error::NotCovered(x.to_f64()));
                }
                if *x >= S::from_rational(self.span_end()) {
                    return self.above.as_ref().map(S::from_rational).ok_or(Error::NotCovered(x.to_f64()));
                }
                x.clone()
            }
        };
        let i = self.piece_at(&r).ok_or(Error::NotCovered(x.to_f64()))?;
        self.pieces[i].expr.eval(&r)
    }

    /// Integral of the datum from the start of the base span to `x`, which
    /// lies inside the span (end included).
    fn span_integral<S: Scalar>(&self, x: &S) -> Result<S> {
        let mut acc = S::zero();
        for p in &self.pieces {
            let a = S::from_rational(&p.start);
            let b = S::from_rational(&p.end);
            if *x <= a {
                break;
            }
            let top = if *x < b { x.clone() } else { b };
            acc = acc + p.expr.integral(&a, &top)?;
        }
        Ok(acc)
    }

    /// A primitive of the datum on the whole line (where it is defined).
    pub fn antiderivative<S: Scalar>(&self, x: &S) -> Result<S> {
        if let Some((k, r)) = self.reduce(x) {
            let inner = self.span_integral(&r)?;
            if k == 0 {
                return Ok(inner);
            }
            let whole = self.span_integral(&S::from_rational(self.span_end()))?;
            return Ok(whole * S::from_int(k) + inner);
        }
        let a = S::from_rational(self.span_start());
        let b = S::from_rational(self.span_end());
        if *x < a {
            let below = self.below.as_ref().ok_or(Error::NotCovered(x.to_f64()))?;
            Ok(S::from_rational(below) * (x.clone() - a))
        } else if *x > b {
            let above = self.above.as_ref().ok_or(Error::NotCovered(x.to_f64()))?;
            Ok(self.span_integral(&b)? + S::from_rational(above) * (x.clone() - b))
        } else {
            self.span_integral(x)
        }
    }

    pub fn integral<S: Scalar>(&self, a: &S, b: &S) -> Result<S> {
        if let Some(v) = self.short_periodic_integral(a, b) {
            return v;
        }
        Ok(self.antiderivative(b)? - self.antiderivative(a)?)
    }

    /// Integral over `[a, b]` for periodic data with `a <= b <= a + period`,
    /// walking only the pieces the interval meets.
    fn short_periodic_integral<S: Scalar>(&self, a: &S, b: &S) -> Option<Result<S>> {
        let period = S::from_rational(self.period.as_ref()?);
        let mut left = b.clone() - a.clone();
        if left.is_negative() || left > period {
            return None;
        }
        let (_, mut x) = self.reduce(a)?;
        let mut i = self.pieces.partition_point(|p| S::from_rational(&p.end) <= x).min(self.pieces.len() - 1);
        let mut acc = S::zero();
        while left.is_positive() {
            let end = S::from_rational(&self.pieces[i].end);
            let reach = x.clone() + left.clone();
            let last = reach < end;
            let top = if last { reach } else { end };
            match self.pieces[i].expr.integral(&x, &top) {
                Ok(v) => acc = acc + v,
                Err(e) => return Some(Err(e)),
            }
            if last {
                break;
            }
            left = left - (top - x);
            i = (i + 1) % self.pieces.len();
            x = S::from_rational(&self.pieces[i].start);
        }
        Some(Ok(acc))
    }

    /// Mean of the datum over `[center - width/2, center + width/2]`.
    pub fn cell_average<S: Scalar>(&self, center: &S, width: &S) -> Result<S> {
        if !width.is_positive() {
            return Err(Error::Precondition(format!("cell width must be positive, got {width}")));
        }
        let half = width.clone() / S::from_int(2);
        let a = center.clone() - half.clone();
        let b = center.clone() + half;
        Ok(self.integral(&a, &b)? / width.clone())
    }
}
