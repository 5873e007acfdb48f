use super::{CoeffKind, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense univariate polynomial over ℚ in the formal parameter `u`.
/// Coefficients are stored lowest degree first with no trailing zeros; the
/// zero polynomial is the empty list.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RatPoly {
    c: Vec<Rat>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::constant(Rat::one())
    }

    pub fn constant(r: Rat) -> Self {
        RatPoly::from_coeffs(vec![r])
    }

    /// The monomial `u`.
    pub fn var() -> Self {
        RatPoly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn from_coeffs(c: Vec<Rat>) -> Self {
        let mut p = RatPoly { c };
        p.trim();
        p
    }

    pub fn from_ints(c: &[i64]) -> Self {
        RatPoly::from_coeffs(c.iter().map(|&n| super::rat_int(n)).collect())
    }

    fn trim(&mut self) {
        while self.c.last().map_or(false, |x| x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.c.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.c.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(self.coeff(i) + rhs.coeff(i));
        }
        RatPoly::from_coeffs(c)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(self.coeff(i) - rhs.coeff(i));
        }
        RatPoly::from_coeffs(c)
    }

    pub fn neg(&self) -> Self {
        RatPoly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(c)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return RatPoly::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| x * super::rat_int(i as i64))
            .collect();
        RatPoly::from_coeffs(c)
    }

    /// Long division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.c.len() < d.c.len() {
            return (RatPoly::zero(), self.clone());
        }
        let dd = d.c.len() - 1;
        let lead = d.c.last().unwrap();
        let mut rem = self.c.clone();
        let mut q = vec![Rat::zero(); self.c.len() - dd];
        while rem.len() >= d.c.len() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / lead;
            for (i, c) in d.c.iter().enumerate() {
                let v = &rem[k + i] - c * &f;
                rem[k + i] = v;
            }
            q[k] = f;
            rem.pop(); // leading term cancelled exactly
            while rem.last().map_or(false, |x| x.is_zero()) {
                rem.pop();
            }
        }
        (RatPoly::from_coeffs(q), RatPoly::from_coeffs(rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic multiple of self (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => RatPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Zero for the zero polynomial.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in &self.c {
            num = num.gcd(&c.numer().abs());
            den = den.lcm(c.denom());
        }
        Rat::new(num, den)
    }

    /// Integer-coefficient polynomial proportional to self, with content 1
    /// and positive leading coefficient. Rejects the zero polynomial.
    pub fn primitive_part(&self) -> Result<IntPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut scaled = self.scale(&self.content().recip());
        if scaled.leading().unwrap().is_negative() {
            scaled = scaled.neg();
        }
        Ok(IntPoly {
            c: scaled.c.iter().map(|x| x.to_integer()).collect(),
        })
    }

    /// Squarefree primitive part: `self / gcd(self, self')`, normalized to
    /// integer coefficients with positive leading coefficient.
    pub fn squarefree_primitive(&self) -> Result<IntPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = poly_gcd(self, &self.derivative());
        let sf = if g.is_constant() {
            self.clone()
        } else {
            self.div_exact(&g)
        };
        sf.primitive_part()
    }
}

/// Monic greatest common divisor by the Euclidean algorithm; gcd(0,0) = 0.
pub fn poly_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let (_, r) = a.divrem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

/// Unique interpolating polynomial through distinct sample points.
pub fn interpolate(points: &[(Rat, Rat)]) -> RatPoly {
    let mut acc = RatPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = RatPoly::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            // (x - xj) / (xi - xj)
            let den = xi - xj;
            basis = basis.mul(&RatPoly::from_coeffs(vec![
                -xj / &den,
                den.recip(),
            ]));
        }
        acc = acc.add(&basis);
    }
    acc
}

impl super::Coeff for RatPoly {
    fn zero() -> Self {
        RatPoly::zero()
    }
    fn one() -> Self {
        RatPoly::one()
    }
    fn is_zero(&self) -> bool {
        RatPoly::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn from_int(n: i64) -> Self {
        RatPoly::constant(super::rat_int(n))
    }
    fn mul_rat(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn kind(&self) -> CoeffKind {
        let nonzero = self.c.iter().filter(|c| !Zero::is_zero(*c)).count();
        if nonzero <= 1 {
            // constant or monomial
            match self.degree() {
                None => CoeffKind::Atom {
                    text: "0".into(),
                    negative: false,
                },
                Some(d) => {
                    let lead = self.leading().unwrap();
                    if d == 0 {
                        return lead.kind();
                    }
                    let text = monomial_text(&lead.abs().to_string(), d);
                    CoeffKind::Atom {
                        text,
                        negative: lead.is_negative(),
                    }
                }
            }
        } else {
            CoeffKind::Composite(self.to_string())
        }
    }
}

fn monomial_text(abs: &str, exp: usize) -> String {
    let mut s = String::new();
    if abs != "1" {
        if abs.contains('/') {
            s.push('(');
            s.push_str(abs);
            s.push(')');
        } else {
            s.push_str(abs);
        }
    }
    s.push('u');
    if exp > 1 {
        s.push('^');
        s.push_str(&exp.to_string());
    }
    s
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &[(usize, String, bool)]) -> fmt::Result {
    // terms: (exponent, absolute text, negative), highest exponent first
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (exp, abs, neg)) in terms.iter().enumerate() {
        if i == 0 {
            if *neg {
                write!(f, "-")?;
            }
        } else if *neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if *exp == 0 {
            write!(f, "{abs}")?;
        } else {
            write!(f, "{}", monomial_text(abs, *exp))?;
        }
    }
    Ok(())
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, c.abs().to_string(), c.is_negative()))
            .collect();
        fmt_terms(f, &terms)
    }
}

/// Dense integer polynomial, lowest degree first, no trailing zeros. Only
/// produced in normalized form: content 1, positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    pub fn one() -> Self {
        IntPoly {
            c: vec![BigInt::one()],
        }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        let mut c: Vec<BigInt> = c.iter().map(|&n| BigInt::from(n)).collect();
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    pub fn to_rat_poly(&self) -> RatPoly {
        RatPoly::from_coeffs(self.c.iter().map(|x| Rat::from_integer(x.clone())).collect())
    }

    /// Ascending coefficient list as exact decimal strings.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.c.iter().map(|x| x.to_string()).collect()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, c.abs().to_string(), c.is_negative()))
            .collect();
        fmt_terms(f, &terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int, Coeff};

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn basic_ops() {
        let a = p(&[-6, 5]); // 5u - 6
        let b = p(&[51, 14]); // 14u + 51
        assert_eq!(a.add(&b), p(&[45, 19]));
        assert_eq!(a.mul(&b), p(&[-306, 171, 70]));
        assert_eq!(a.eval(&rat(6, 5)), rat_int(0));
        assert_eq!(a.degree(), Some(1));
        assert!(RatPoly::zero().is_zero());
        assert_eq!(a.sub(&a), RatPoly::zero());
        assert_eq!(a.derivative(), p(&[5]));
    }

    #[test]
    fn division() {
        let a = p(&[-6, 5]).mul(&p(&[2, 1]));
        let (q, r) = a.divrem(&p(&[-6, 5]));
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[1, 0, 1]).divrem(&p(&[1, 1]));
        assert_eq!(q, p(&[-1, 1]));
        assert_eq!(r, p(&[2]));
        assert_eq!(a.div_exact(&p(&[2, 1])), p(&[-6, 5]));
    }

    #[test]
    fn gcds() {
        // identical inputs come back monic
        let g = poly_gcd(&p(&[-1, 1]), &p(&[-1, 1]));
        assert_eq!(g, p(&[-1, 1]));
        // coprime linears
        assert_eq!(poly_gcd(&p(&[-6, 5]), &p(&[51, 14])), RatPoly::one());
        // common factor, monic form of 5u - 6 is u - 6/5
        let g = poly_gcd(&p(&[-6, 5]).mul(&p(&[2, 1])), &p(&[-6, 5]));
        assert_eq!(g, RatPoly::from_coeffs(vec![rat(-6, 5), rat_int(1)]));
        assert!(poly_gcd(&RatPoly::zero(), &RatPoly::zero()).is_zero());
    }

    #[test]
    fn primitive_parts() {
        // (-10u + 12) / 7 normalizes to 5u - 6
        let q = RatPoly::from_coeffs(vec![rat(12, 7), rat(-10, 7)]);
        assert_eq!(q.primitive_part().unwrap(), IntPoly::from_ints(&[-6, 5]));
        let fixed = p(&[10, -26, 27]);
        assert_eq!(
            fixed.primitive_part().unwrap(),
            IntPoly::from_ints(&[10, -26, 27])
        );
        assert_eq!(
            RatPoly::constant(rat(3, 2)).primitive_part().unwrap(),
            IntPoly::one()
        );
        assert!(RatPoly::zero().primitive_part().is_err());
        // invariance under nonzero rational scaling
        for c in [rat(7, 3), rat(-2, 9), rat_int(4)] {
            assert_eq!(
                fixed.scale(&c).primitive_part().unwrap(),
                fixed.primitive_part().unwrap()
            );
        }
    }

    #[test]
    fn squarefree() {
        let sq = p(&[-6, 5]).mul(&p(&[-6, 5])).mul(&p(&[1, 1]));
        assert_eq!(
            sq.squarefree_primitive().unwrap(),
            IntPoly::from_ints(&[-6, -1, 5]) // (5u - 6)(u + 1)
        );
    }

    #[test]
    fn interpolation_round_trip() {
        let f = p(&[1, -3, 0, 2]);
        let pts: Vec<_> = (0..=3)
            .map(|i| (rat_int(i), f.eval(&rat_int(i))))
            .collect();
        assert_eq!(interpolate(&pts), f);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-6, 5]).to_string(), "5u - 6");
        assert_eq!(p(&[10, -26, 27]).to_string(), "27u^2 - 26u + 10");
        assert_eq!(p(&[1, -1]).to_string(), "-u + 1");
        assert_eq!(p(&[0, 1]).to_string(), "u");
        assert_eq!(p(&[-1]).to_string(), "-1");
        assert_eq!(RatPoly::zero().to_string(), "0");
        assert_eq!(RatPoly::from_coeffs(vec![rat(1, 2)]).to_string(), "1/2");
        assert_eq!(
            RatPoly::from_coeffs(vec![rat_int(0), rat(5, 4)]).to_string(),
            "(5/4)u"
        );
        assert_eq!(IntPoly::from_ints(&[-4164, 865]).to_string(), "865u - 4164");
    }

    #[test]
    fn coeff_kind() {
        assert_eq!(p(&[1]).kind(), CoeffKind::One);
        assert_eq!(p(&[-1]).kind(), CoeffKind::MinusOne);
        assert_eq!(
            p(&[0, 1]).kind(),
            CoeffKind::Atom {
                text: "u".into(),
                negative: false
            }
        );
        assert_eq!(
            p(&[0, 0, -2]).kind(),
            CoeffKind::Atom {
                text: "2u^2".into(),
                negative: true
            }
        );
        assert_eq!(p(&[2, 1]).kind(), CoeffKind::Composite("u + 2".into()));
    }
}
