//! The closed family of asymptotic expressions the rate pipeline works over.
//!
//! A [`GrowthExpr`] is `C · x^β · log^γ · exp(±c·x^(∓α))` in one of two
//! orientations: small-argument (`z → 0⁺`, log means `ln(1/z)`, exponential
//! factor `exp(-c·z^(-α))`) or large-argument (`t → ∞`, log means `ln t`,
//! exponential factor `exp(c·t^α)`). Envelope inverses of exponential-type
//! expressions fall outside this five-field form; they are carried as a
//! nested-log factor `ln(x^(-1/c) · ln(x^(-1/c))^ν)^ω`.
//!
//! Sign conventions, fixed here once:
//! * `log_pow` is the exponent of `ln(1/z)` (small) or `ln t` (large)
//!   directly: `ln(z^{-1})^{-γ}` has `log_pow = -γ`.
//! * A small-argument expression with `exp_coeff = c > 0` carries
//!   `exp(-c·z^{-α})` and tends to 0 as `z → 0⁺`. A large-argument
//!   expression with `exp_coeff = c` carries `exp(c·t^α)`, so `c < 0` is a
//!   stretched-exponential decay.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// z → 0⁺
    SmallArg,
    /// t → ∞
    LargeArg,
}

/// `ln(x^(-1/c) · ln(x^(-1/c))^inner)^outer`, i.e. `(Λ/c + inner·ln(Λ/c))^outer`
/// with `Λ = ln(1/x) + shift` (small-argument) or `ln x + shift` (large).
///
/// Only produced by envelope inversion of exponential-type expressions
/// (third closed form of the inverse table); `shift` absorbs the
/// coefficient of the inverted expression.
#[derive(Clone, Debug)]
pub struct NestedLog {
    pub c: Scalar,
    pub inner: Scalar,
    pub outer: Scalar,
    pub shift: f64,
}

impl NestedLog {
    fn ln_value(&self, big_l: f64) -> Result<f64> {
        let lam = (big_l + self.shift) / self.c.to_f64();
        if lam <= 0.0 {
            return Err(Error::Domain(format!(
                "nested log: inner argument {lam} <= 0"
            )));
        }
        let n = lam + self.inner.to_f64() * lam.ln();
        if n <= 0.0 {
            return Err(Error::Domain(format!("nested log: value {n} <= 0")));
        }
        Ok(self.outer.to_f64() * n.ln())
    }
}

#[derive(Clone, Debug)]
pub struct GrowthExpr {
    coeff: Scalar,
    pow: Scalar,
    log_pow: Scalar,
    exp_coeff: Scalar,
    exp_pow: Scalar,
    nested: Option<NestedLog>,
    orientation: Orientation,
    /// Small-argument: valid on (0, bound]. Large-argument: valid on [bound, ∞).
    valid_bound: f64,
    /// +1 if the expression increases towards the asymptotic end of its
    /// interval handle (z → 0⁺ resp. t → ∞ maps to ... ); concretely: sign of
    /// d(ln f)/d(ln x) on the valid interval.
    monotone_dir: i8,
}

impl GrowthExpr {
    // ---------------------------------------------------------------- ctors

    pub fn new(
        orientation: Orientation,
        coeff: Scalar,
        pow: Scalar,
        log_pow: Scalar,
        exp_coeff: Scalar,
        exp_pow: Scalar,
    ) -> Result<Self> {
        Self::from_parts(orientation, coeff, pow, log_pow, exp_coeff, exp_pow, None)
    }

    /// Small-argument power-log expression `C·z^β·ln(1/z)^γ`.
    pub fn small(coeff: Scalar, pow: Scalar, log_pow: Scalar) -> Result<Self> {
        Self::new(
            Orientation::SmallArg,
            coeff,
            pow,
            log_pow,
            Scalar::zero(),
            Scalar::zero(),
        )
    }

    /// Small-argument expression with exponential factor `exp(-c·z^(-α))`.
    pub fn small_exp(
        coeff: Scalar,
        pow: Scalar,
        log_pow: Scalar,
        exp_coeff: Scalar,
        exp_pow: Scalar,
    ) -> Result<Self> {
        Self::new(
            Orientation::SmallArg,
            coeff,
            pow,
            log_pow,
            exp_coeff,
            exp_pow,
        )
    }

    /// Large-argument power-log expression `C·t^β·ln(t)^γ`.
    pub fn large(coeff: Scalar, pow: Scalar, log_pow: Scalar) -> Result<Self> {
        Self::new(
            Orientation::LargeArg,
            coeff,
            pow,
            log_pow,
            Scalar::zero(),
            Scalar::zero(),
        )
    }

    pub fn large_exp(
        coeff: Scalar,
        pow: Scalar,
        log_pow: Scalar,
        exp_coeff: Scalar,
        exp_pow: Scalar,
    ) -> Result<Self> {
        Self::new(
            Orientation::LargeArg,
            coeff,
            pow,
            log_pow,
            exp_coeff,
            exp_pow,
        )
    }

    pub fn constant(orientation: Orientation, coeff: Scalar) -> Result<Self> {
        Self::new(
            orientation,
            coeff,
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
        )
    }

    pub(crate) fn nested_small(coeff: Scalar, nested: NestedLog) -> Result<Self> {
        Self::from_parts(
            Orientation::SmallArg,
            coeff,
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Some(nested),
        )
    }

    fn from_parts(
        orientation: Orientation,
        coeff: Scalar,
        pow: Scalar,
        log_pow: Scalar,
        mut exp_coeff: Scalar,
        mut exp_pow: Scalar,
        nested: Option<NestedLog>,
    ) -> Result<Self> {
        if !coeff.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "coefficient must be positive, got {coeff}"
            )));
        }
        if exp_coeff.is_zero() {
            exp_pow = Scalar::zero();
        } else if !exp_pow.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "exp_pow must be positive when exp_coeff != 0, got {exp_pow}"
            )));
        }
        if exp_coeff.is_zero() {
            exp_coeff = Scalar::zero();
        }
        if let Some(n) = &nested {
            if !n.c.is_positive() {
                return Err(Error::InvalidParameter(
                    "nested log scale must be positive".into(),
                ));
            }
            if !(pow.is_zero() && log_pow.is_zero() && exp_coeff.is_zero()) {
                return Err(Error::InvalidParameter(
                    "nested expressions carry no other factors".into(),
                ));
            }
        }
        let mut e = GrowthExpr {
            coeff,
            pow,
            log_pow,
            exp_coeff,
            exp_pow,
            nested,
            orientation,
            valid_bound: 0.0,
            monotone_dir: 0,
        };
        e.settle_valid_interval()?;
        Ok(e)
    }

    /// Shrinks the declared interval until `ln f` is monotone on a log grid.
    fn settle_valid_interval(&mut self) -> Result<()> {
        let small = self.orientation == Orientation::SmallArg;
        let mut bound: f64 = if small {
            if !self.log_pow.is_zero() || self.nested.is_some() {
                0.5
            } else {
                1.0
            }
        } else if !self.log_pow.is_zero() || self.nested.is_some() {
            3.0
        } else {
            1.0
        };
        const GRID: usize = 128;
        for _ in 0..80 {
            let far = if small { 1e-14_f64 } else { 1e14_f64 };
            let (ln_a, ln_b) = (bound.ln(), far.ln());
            let mut vals = Vec::with_capacity(GRID);
            let mut ok = true;
            for i in 0..GRID {
                let t = i as f64 / (GRID - 1) as f64;
                let x = (ln_a + t * (ln_b - ln_a)).exp();
                match self.ln_eval(x) {
                    Ok(v) => vals.push(v),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let mut dir = 0i8;
                let mut monotone = true;
                for w in vals.windows(2) {
                    // grid runs from `bound` towards the asymptotic end
                    let d = w[1] - w[0];
                    if d.abs() <= 1e-13 * (1.0 + w[0].abs()) {
                        continue;
                    }
                    let s = if d > 0.0 { 1i8 } else { -1i8 };
                    if dir == 0 {
                        dir = s;
                    } else if dir != s {
                        monotone = false;
                        break;
                    }
                }
                if monotone {
                    self.valid_bound = bound;
                    // dir was measured towards the asymptotic end; flip so the
                    // stored direction is with respect to increasing argument.
                    self.monotone_dir = if small { -dir } else { dir };
                    return Ok(());
                }
            }
            bound = if small { bound / 2.0 } else { bound * 2.0 };
            if small && bound < 1e-11 {
                break;
            }
            if !small && bound > 1e11 {
                break;
            }
        }
        Err(Error::NotMonotone(
            if small { "0" } else { "infinity" },
            format!("{self}"),
        ))
    }

    // ------------------------------------------------------------ accessors

    pub fn coeff(&self) -> &Scalar {
        &self.coeff
    }
    pub fn pow(&self) -> &Scalar {
        &self.pow
    }
    pub fn log_pow(&self) -> &Scalar {
        &self.log_pow
    }
    pub fn exp_coeff(&self) -> &Scalar {
        &self.exp_coeff
    }
    pub fn exp_pow(&self) -> &Scalar {
        &self.exp_pow
    }
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
    pub fn nested(&self) -> Option<&NestedLog> {
        self.nested.as_ref()
    }
    /// Small-argument: z ∈ (0, bound]. Large-argument: t ∈ [bound, ∞).
    pub fn valid_bound(&self) -> f64 {
        self.valid_bound
    }
    /// Sign of d(ln f)/d(ln x) on the valid interval.
    pub fn monotone_dir(&self) -> i8 {
        self.monotone_dir
    }
    pub fn is_constant(&self) -> bool {
        self.pow.is_zero()
            && self.log_pow.is_zero()
            && self.exp_coeff.is_zero()
            && self.nested.is_none()
    }

    /// Increasing towards 0 value as z → 0⁺ (small-arg), i.e. vanishing at 0.
    pub fn vanishes_at_origin(&self) -> bool {
        debug_assert_eq!(self.orientation, Orientation::SmallArg);
        match self.small_arg_class() {
            -1 => true,
            1 => false,
            _ => {
                if !self.pow.is_zero() {
                    self.pow.is_positive()
                } else if !self.log_pow.is_zero() {
                    self.log_pow.is_negative()
                } else {
                    false
                }
            }
        }
    }

    // ----------------------------------------------------------- evaluation

    /// `ln f(x)`; robust against under/overflow of the exponential factor.
    pub fn ln_eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("argument {x} not positive finite")));
        }
        let big_l = match self.orientation {
            Orientation::SmallArg => -x.ln(),
            Orientation::LargeArg => x.ln(),
        };
        let mut v = self.coeff.to_f64().ln() + self.pow.to_f64() * x.ln();
        if !self.log_pow.is_zero() {
            if big_l <= 0.0 {
                return Err(Error::Domain(match self.orientation {
                    Orientation::SmallArg => format!("log factor needs z < 1, got {x}"),
                    Orientation::LargeArg => format!("log factor needs t > 1, got {x}"),
                }));
            }
            v += self.log_pow.to_f64() * big_l.ln();
        }
        if !self.exp_coeff.is_zero() {
            let a = self.exp_pow.to_f64();
            let c = self.exp_coeff.to_f64();
            v += match self.orientation {
                Orientation::SmallArg => -c * x.powf(-a),
                Orientation::LargeArg => c * x.powf(a),
            };
        }
        if let Some(n) = &self.nested {
            v += n.ln_value(big_l)?;
        }
        Ok(v)
    }

    /// Evaluates the expression. May underflow to 0 or overflow to ∞.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.ln_eval(x)?.exp())
    }

    // ----------------------------------------------------------- operations

    /// Componentwise product. Exponential factors must share `exp_pow`
    /// (`IncompatibleExponential` otherwise); a nested factor multiplied by
    /// a non-constant collapses to its leading `log^outer` behavior.
    pub fn mul(&self, other: &GrowthExpr) -> Result<GrowthExpr> {
        if self.orientation != other.orientation {
            return Err(Error::OrientationMismatch);
        }
        // keep a pure nested form when the other side is a bare constant
        if self.nested.is_some() && other.is_constant() {
            let mut r = self.clone();
            r.coeff = &r.coeff * &other.coeff;
            return GrowthExpr::from_parts(
                r.orientation,
                r.coeff,
                r.pow,
                r.log_pow,
                r.exp_coeff,
                r.exp_pow,
                r.nested,
            );
        }
        if other.nested.is_some() && self.is_constant() {
            return other.mul(self);
        }
        let a = self.collapse_nested();
        let b = other.collapse_nested();
        let (exp_coeff, exp_pow) = if a.exp_coeff.is_zero() {
            (b.exp_coeff.clone(), b.exp_pow.clone())
        } else if b.exp_coeff.is_zero() {
            (a.exp_coeff.clone(), a.exp_pow.clone())
        } else if a.exp_pow == b.exp_pow {
            (&a.exp_coeff + &b.exp_coeff, a.exp_pow.clone())
        } else {
            return Err(Error::IncompatibleExponential(
                a.exp_pow.to_f64(),
                b.exp_pow.to_f64(),
            ));
        };
        GrowthExpr::from_parts(
            a.orientation,
            &a.coeff * &b.coeff,
            &a.pow + &b.pow,
            &a.log_pow + &b.log_pow,
            exp_coeff,
            exp_pow,
            None,
        )
    }

    /// Raises to a scalar power (exact on every field).
    pub fn pow_scalar(&self, r: &Scalar) -> Result<GrowthExpr> {
        if r.is_zero() {
            return GrowthExpr::constant(self.orientation, Scalar::one());
        }
        let nested = self.nested.as_ref().map(|n| NestedLog {
            c: n.c.clone(),
            inner: n.inner.clone(),
            outer: &n.outer * r,
            shift: n.shift,
        });
        GrowthExpr::from_parts(
            self.orientation,
            self.coeff.pow(r),
            &self.pow * r,
            &self.log_pow * r,
            &self.exp_coeff * r,
            if self.exp_coeff.is_zero() {
                Scalar::zero()
            } else {
                self.exp_pow.clone()
            },
            nested,
        )
    }

    pub fn recip(&self) -> Result<GrowthExpr> {
        self.pow_scalar(&Scalar::from_int(-1))
    }

    /// The substitution `x ↦ 1/x`, flipping orientation. Exact on every
    /// field; applying it twice is the identity.
    pub fn reciprocal_arg(&self) -> GrowthExpr {
        let orientation = match self.orientation {
            Orientation::SmallArg => Orientation::LargeArg,
            Orientation::LargeArg => Orientation::SmallArg,
        };
        GrowthExpr {
            coeff: self.coeff.clone(),
            pow: -&self.pow,
            log_pow: self.log_pow.clone(),
            exp_coeff: -&self.exp_coeff,
            exp_pow: self.exp_pow.clone(),
            nested: self.nested.clone(),
            orientation,
            valid_bound: if self.valid_bound > 0.0 {
                1.0 / self.valid_bound
            } else {
                0.0
            },
            monotone_dir: -self.monotone_dir,
        }
    }

    /// Replaces a nested factor by its leading `log^outer` behavior
    /// (constants tracked through the `1/c` rescale of the log).
    pub fn collapse_nested(&self) -> GrowthExpr {
        match &self.nested {
            None => self.clone(),
            Some(n) => {
                let c_pow = n.c.pow(&-&n.outer);
                GrowthExpr::from_parts(
                    self.orientation,
                    &self.coeff * &c_pow,
                    self.pow.clone(),
                    &self.log_pow + &n.outer,
                    self.exp_coeff.clone(),
                    self.exp_pow.clone(),
                    None,
                )
                .expect("collapse of a valid expression stays valid")
            }
        }
    }

    fn small_arg_class(&self) -> i8 {
        debug_assert!(self.nested.is_none());
        if self.exp_coeff.is_positive() {
            -1
        } else if self.exp_coeff.is_negative() {
            1
        } else {
            0
        }
    }

    /// Orders two same-orientation expressions by eventual value
    /// (`Less` = asymptotically smaller as z → 0⁺ resp. t → ∞).
    ///
    /// Lexicographic on (exponential class, exponential strength, power,
    /// log power, coefficient). A decaying exponential factor beats any
    /// power: it is the first key.
    pub fn asym_cmp(&self, other: &GrowthExpr) -> Result<Ordering> {
        if self.orientation != other.orientation {
            return Err(Error::OrientationMismatch);
        }
        let a = self.collapse_nested();
        let b = other.collapse_nested();
        let ord = match a.orientation {
            Orientation::SmallArg => Self::cmp_small(&a, &b),
            Orientation::LargeArg => Self::cmp_small(&b.reciprocal_arg(), &a.reciprocal_arg()),
        };
        Ok(ord)
    }

    fn cmp_small(a: &GrowthExpr, b: &GrowthExpr) -> Ordering {
        let (ca, cb) = (a.small_arg_class(), b.small_arg_class());
        if ca != cb {
            return ca.cmp(&cb);
        }
        if ca != 0 {
            // both exponential on the same side; stronger decay = larger
            // exp_pow, then larger exp_coeff
            let strength = |e: &GrowthExpr| (e.exp_pow.clone(), e.exp_coeff.clone());
            let (sa, sb) = (strength(a), strength(b));
            let o = sa
                .0
                .partial_cmp(&sb.0)
                .unwrap_or(Ordering::Equal)
                .then_with(|| sa.1.partial_cmp(&sb.1).unwrap_or(Ordering::Equal));
            if o != Ordering::Equal {
                // decaying side (class -1): stronger decay is smaller
                return if ca == -1 { o.reverse() } else { o };
            }
        }
        // larger power of z vanishes faster
        match a.pow.partial_cmp(&b.pow) {
            Some(Ordering::Less) => return Ordering::Greater,
            Some(Ordering::Greater) => return Ordering::Less,
            _ => {}
        }
        // ln(1/z) → ∞: larger log_pow = larger value
        match a.log_pow.partial_cmp(&b.log_pow) {
            Some(Ordering::Less) => return Ordering::Less,
            Some(Ordering::Greater) => return Ordering::Greater,
            _ => {}
        }
        a.coeff.partial_cmp(&b.coeff).unwrap_or(Ordering::Equal)
    }

    /// The asymptotically smaller of the two expressions.
    pub fn asym_min(&self, other: &GrowthExpr) -> Result<GrowthExpr> {
        Ok(match self.asym_cmp(other)? {
            Ordering::Greater => other.clone(),
            _ => self.clone(),
        })
    }

    /// The asymptotically larger of the two expressions.
    pub fn asym_max(&self, other: &GrowthExpr) -> Result<GrowthExpr> {
        Ok(match self.asym_cmp(other)? {
            Ordering::Less => other.clone(),
            _ => self.clone(),
        })
    }

    /// Composition `self ∘ inner` at leading order, both small-argument and
    /// `inner → 0`. Keeps the power of the principal variable and the
    /// leading log exponent; doubly-logarithmic corrections are dropped,
    /// matching how the envelope calculus treats compositions.
    pub fn compose(&self, inner: &GrowthExpr) -> Result<GrowthExpr> {
        if self.orientation != Orientation::SmallArg || inner.orientation != Orientation::SmallArg
        {
            return Err(Error::OrientationMismatch);
        }
        if self.is_constant() {
            return GrowthExpr::constant(Orientation::SmallArg, self.coeff.clone());
        }
        if self.nested.is_some() {
            return Err(Error::CompositionOutsideFamily(
                "outer expression carries a nested factor".into(),
            ));
        }
        if let Some(n) = &inner.nested {
            // inner = coeff_g · N(h)^outer with N = Λ/c + inner·ln(Λ/c)
            if !self.log_pow.is_zero() {
                return Err(Error::CompositionOutsideFamily(
                    "log factor composed with a nested inverse is doubly logarithmic".into(),
                ));
            }
            let kappa = &self.pow;
            let mut coeff = &self.coeff * &inner.coeff.pow(kappa);
            coeff = &coeff * &n.c.pow(&-&(&n.outer * kappa));
            let mut pow = Scalar::zero();
            let mut log_pow = &n.outer * kappa;
            if !self.exp_coeff.is_zero() {
                // exp(-a·g^{-α}) stays in the family only when g^{-α} is the
                // bare nested log, i.e. α·outer = -1
                if &self.exp_pow * &n.outer != Scalar::from_int(-1) {
                    return Err(Error::CompositionOutsideFamily(format!(
                        "exponential exponent {} incompatible with nested outer power {}",
                        self.exp_pow, n.outer
                    )));
                }
                // g^{-α} = Λ/c + ν·ln(Λ/c), Λ = L + shift
                // exp(-a·g^{-α}) = e^{-a·shift/c} · h^{a/c} · (Λ/c)^{-a·ν}
                let a = &self.exp_coeff;
                // the coefficient of inner must be 1 for exactness here; a
                // non-unit coefficient perturbs g^{-α} additively at O(1)
                // and is absorbed into the envelope constant
                pow = &pow + &(a / &n.c);
                log_pow = &log_pow - &(a * &n.inner);
                coeff = &coeff * &n.c.pow(&(a * &n.inner));
                let shift_factor = (-a.to_f64() * n.shift / n.c.to_f64()).exp();
                coeff = &coeff * &Scalar::Float(shift_factor);
            }
            return GrowthExpr::from_parts(
                Orientation::SmallArg,
                coeff,
                pow,
                log_pow,
                Scalar::zero(),
                Scalar::zero(),
                None,
            );
        }
        if !inner.exp_coeff.is_zero() {
            // g itself decays exponentially; only a pure power outer stays
            // inside the family
            if self.log_pow.is_zero() && self.exp_coeff.is_zero() {
                let g_pow = inner.pow_scalar(&self.pow)?;
                return GrowthExpr::from_parts(
                    Orientation::SmallArg,
                    &self.coeff * g_pow.coeff(),
                    g_pow.pow().clone(),
                    g_pow.log_pow().clone(),
                    g_pow.exp_coeff().clone(),
                    g_pow.exp_pow().clone(),
                    None,
                );
            }
            return Err(Error::CompositionOutsideFamily(
                "log or exponential factor composed with an exponentially small inner".into(),
            ));
        }
        // inner = cg · h^a · ln(1/h)^b with a > 0
        let a = &inner.pow;
        if !a.is_positive() {
            return Err(Error::CompositionOutsideFamily(
                "inner expression does not vanish at 0".into(),
            ));
        }
        let b = &inner.log_pow;
        let kappa = &self.pow;
        let nu = &self.log_pow;
        let mut coeff = &self.coeff * &inner.coeff.pow(kappa);
        let mut pow = a * kappa;
        let mut log_pow = &(b * kappa) + nu;
        if !nu.is_zero() {
            // ln(1/g) = a·ln(1/h)·(1 + o(1))
            coeff = &coeff * &a.pow(nu);
        }
        let mut exp_coeff = Scalar::zero();
        let mut exp_pow = Scalar::zero();
        if !self.exp_coeff.is_zero() {
            if !b.is_zero() {
                return Err(Error::CompositionOutsideFamily(
                    "exponential of a power-log inner leaves the family".into(),
                ));
            }
            // exp(-c_f·(cg·h^a)^{-α}) : exact
            exp_coeff = &self.exp_coeff * &inner.coeff.pow(&-&self.exp_pow);
            exp_pow = a * &self.exp_pow;
            // power/log parts already handled above
            pow = &pow + &Scalar::zero();
            let _ = &mut log_pow;
        }
        GrowthExpr::from_parts(
            Orientation::SmallArg,
            coeff,
            pow,
            log_pow,
            exp_coeff,
            exp_pow,
            None,
        )
    }

    /// Argument rescale `f(z) → f(εz)` at leading order: pure rescale of the
    /// coefficient for power-log factors, `exp_coeff ↦ c·ε^(-α)` for the
    /// exponential factor.
    pub fn scale_arg(&self, eps: &Scalar) -> Result<GrowthExpr> {
        if self.orientation != Orientation::SmallArg {
            return Err(Error::OrientationMismatch);
        }
        if self.nested.is_some() {
            return Err(Error::CompositionOutsideFamily(
                "argument rescale of a nested expression".into(),
            ));
        }
        if !eps.is_positive() {
            return Err(Error::InvalidParameter("scale must be positive".into()));
        }
        let exp_coeff = if self.exp_coeff.is_zero() {
            Scalar::zero()
        } else {
            &self.exp_coeff * &eps.pow(&-&self.exp_pow)
        };
        GrowthExpr::from_parts(
            Orientation::SmallArg,
            &self.coeff * &eps.pow(&self.pow),
            self.pow.clone(),
            self.log_pow.clone(),
            exp_coeff,
            self.exp_pow.clone(),
            None,
        )
    }

    /// Exact structural equality on all symbolic fields.
    pub fn same_fields(&self, other: &GrowthExpr) -> bool {
        self.orientation == other.orientation
            && self.coeff == other.coeff
            && self.pow == other.pow
            && self.log_pow == other.log_pow
            && self.exp_coeff == other.exp_coeff
            && self.exp_pow == other.exp_pow
            && match (&self.nested, &other.nested) {
                (None, None) => true,
                (Some(a), Some(b)) => {
                    a.c == b.c && a.inner == b.inner && a.outer == b.outer && a.shift == b.shift
                }
                _ => false,
            }
    }
}

// ------------------------------------------------------------ text form

impl fmt::Display for GrowthExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.orientation {
            Orientation::SmallArg => "z",
            Orientation::LargeArg => "t",
        };
        write!(f, "{}", self.coeff)?;
        if !self.pow.is_zero() {
            write!(f, " * {var}^{}", self.pow)?;
        }
        if !self.log_pow.is_zero() {
            write!(f, " * log^{}", self.log_pow)?;
        }
        if !self.exp_coeff.is_zero() {
            match self.orientation {
                Orientation::SmallArg => {
                    write!(f, " * exp({} * {var}^-{})", -&self.exp_coeff, self.exp_pow)?
                }
                Orientation::LargeArg => {
                    write!(f, " * exp({} * {var}^{})", self.exp_coeff, self.exp_pow)?
                }
            }
        }
        if let Some(n) = &self.nested {
            write!(
                f,
                " * loglog[c={}, inner={}, outer={}, shift={}]",
                n.c, n.inner, n.outer, n.shift
            )?;
        }
        match self.orientation {
            Orientation::SmallArg => write!(f, " @small"),
            Orientation::LargeArg => write!(f, " @large"),
        }
    }
}

fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad numerator {n:?}: {e}")))?;
        let d: i64 = d
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad denominator {d:?}: {e}")))?;
        if d == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(Scalar::ratio(n, d));
    }
    if let Ok(n) = s.parse::<i64>() {
        return Ok(Scalar::from_int(n));
    }
    s.parse::<f64>()
        .map(Scalar::Float)
        .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
}

impl FromStr for GrowthExpr {
    type Err = Error;

    /// Parses the canonical text form
    /// `C * z^b * log^g * exp(-c * z^-a) @small` /
    /// `C * t^b * log^g * exp(c * t^a) @large`,
    /// every factor after the coefficient optional.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, orientation) = if let Some(b) = s.strip_suffix("@small") {
            (b.trim(), Orientation::SmallArg)
        } else if let Some(b) = s.strip_suffix("@large") {
            (b.trim(), Orientation::LargeArg)
        } else {
            return Err(Error::Parse(
                "expression must end with @small or @large".into(),
            ));
        };
        let var = match orientation {
            Orientation::SmallArg => 'z',
            Orientation::LargeArg => 't',
        };
        let mut coeff: Option<Scalar> = None;
        let mut pow = Scalar::zero();
        let mut log_pow = Scalar::zero();
        let mut exp_coeff = Scalar::zero();
        let mut exp_pow = Scalar::zero();
        // split at top-level '*' only (an exp(...) factor contains one inside)
        let mut factors = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        for (i, ch) in body.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth = depth.checked_sub(1).ok_or_else(|| {
                        Error::Parse("unbalanced parentheses".into())
                    })?;
                }
                '*' if depth == 0 => {
                    factors.push(body[start..i].trim());
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse("unbalanced parentheses".into()));
        }
        factors.push(body[start..].trim());
        for (i, tok) in factors.into_iter().enumerate() {
            if let Some(inside) = tok.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
                let (c_str, x_str) = inside
                    .split_once('*')
                    .ok_or_else(|| Error::Parse(format!("malformed exp factor {inside:?}")))?;
                let c = parse_scalar(c_str)?;
                let x_str = x_str.trim();
                let tail = x_str
                    .strip_prefix(var)
                    .and_then(|r| r.strip_prefix('^'))
                    .ok_or_else(|| Error::Parse(format!("malformed exp argument {x_str:?}")))?;
                let a = parse_scalar(tail)?;
                match orientation {
                    Orientation::SmallArg => {
                        // stored convention: exp(-exp_coeff * z^-exp_pow)
                        exp_coeff = -&c;
                        exp_pow = -&a;
                    }
                    Orientation::LargeArg => {
                        exp_coeff = c;
                        exp_pow = a;
                    }
                }
                if !exp_pow.is_positive() {
                    return Err(Error::Parse(format!(
                        "exponential inner power must make exp_pow positive, got {exp_pow}"
                    )));
                }
                continue;
            }
            if tok.is_empty() {
                return Err(Error::Parse("empty factor".into()));
            }
            if let Some(r) = tok.strip_prefix("log^") {
                log_pow = parse_scalar(r)?;
            } else if let Some(r) = tok.strip_prefix(var).and_then(|r| r.strip_prefix('^')) {
                pow = parse_scalar(r)?;
            } else if i == 0 {
                coeff = Some(parse_scalar(tok)?);
            } else {
                return Err(Error::Parse(format!("unrecognized factor {tok:?}")));
            }
        }
        let coeff = coeff.ok_or_else(|| Error::Parse("missing leading coefficient".into()))?;
        GrowthExpr::from_parts(orientation, coeff, pow, log_pow, exp_coeff, exp_pow, None)
    }
}
