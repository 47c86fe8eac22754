//! Exact multivariate Laurent polynomials over the rationals.
//!
//! Exponents live in the half-integer lattice and are stored doubled, so
//! `X^{1/2}` is the pair `(X, 1)` and `X^{-2}` is `(X, -4)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Var = u32;
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// A Laurent monomial with doubled exponents, sorted by variable, zeros dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, i64)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 2)])
    }

    /// Build from `(var, doubled exponent)` pairs; repeated variables add up.
    pub fn from_doubled<I: IntoIterator<Item = (Var, i64)>>(it: I) -> Self {
        let mut m: BTreeMap<Var, i64> = BTreeMap::new();
        for (v, e) in it {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    /// Build from `(var, integer exponent)` pairs.
    pub fn from_exps<I: IntoIterator<Item = (Var, i64)>>(it: I) -> Self {
        Self::from_doubled(it.into_iter().map(|(v, e)| (v, 2 * e)))
    }

    pub fn doubled(&self, v: Var) -> i64 {
        match self.0.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i64)> + '_ {
        self.0.iter().copied()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|&(_, e)| e % 2 == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, n: i64) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * n)).collect())
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        let vars: BTreeSet<Var> = self.0.iter().chain(other.0.iter()).map(|&(v, _)| v).collect();
        vars.into_iter().all(|v| self.doubled(v) <= other.doubled(v))
    }

    /// Lexicographic comparison of the dense exponent vectors, variables in
    /// increasing order.  This is a group order on monomials.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            let x = a.get(i).copied();
            let y = b.get(j).copied();
            match (x, y) {
                (None, None) => return Ordering::Equal,
                (Some((_, e)), None) => return e.cmp(&0),
                (None, Some((_, f))) => return 0.cmp(&f),
                (Some((v, e)), Some((w, f))) => match v.cmp(&w) {
                    Ordering::Less => return e.cmp(&0),
                    Ordering::Greater => return 0.cmp(&f),
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

/// Exact Laurent polynomial: canonical map from monomials to nonzero rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rat::one())
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut p = LaurentPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(it: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v)).collect()
    }

    /// `Some((m, c))` when the polynomial is a single term.
    pub fn as_term(&self) -> Option<(&Monomial, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_monomial(&self) -> Option<&Monomial> {
        self.as_term().filter(|(_, c)| c.is_one()).map(|(m, _)| m)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(Monomial::is_integral)
    }

    pub fn has_positive_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &Rat) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect() }
    }

    /// Integer power; negative exponents only for single terms.
    pub fn pow(&self, n: i64) -> Result<LaurentPoly> {
        if n < 0 {
            let (m, c) = self.as_term().ok_or(Error::NonMonomialInverse)?;
            let c = c.recip().pow(-n as i32);
            return Ok(LaurentPoly::term(m.pow(n), c));
        }
        let mut base = self.clone();
        let mut acc = LaurentPoly::one();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// The term that is componentwise below every other term.
    pub fn lowest_term(&self) -> Result<Monomial> {
        if self.is_zero() {
            return Err(Error::NoUniqueLowestTerm);
        }
        let vars = self.vars();
        let min: Vec<(Var, i64)> = vars
            .iter()
            .map(|&v| (v, self.terms.keys().map(|m| m.doubled(v)).min().unwrap_or(0)))
            .collect();
        let cand = Monomial::from_doubled(min);
        if self.terms.contains_key(&cand) {
            Ok(cand)
        } else {
            Err(Error::NoUniqueLowestTerm)
        }
    }

    /// Lex-largest term, used as the leading term for division.
    fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    fn exponent_box(&self) -> BTreeMap<Var, (i64, i64)> {
        let mut b = BTreeMap::new();
        for v in self.vars() {
            let es = self.terms.keys().map(|m| m.doubled(v));
            let lo = es.clone().min().unwrap_or(0);
            let hi = es.max().unwrap_or(0);
            b.insert(v, (lo, hi));
        }
        b
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if let Some((m, c)) = d.as_term() {
            return Some(self.mul_monomial(&m.inv()).scale(&c.recip()));
        }
        let pb = self.exponent_box();
        let db = d.exponent_box();
        let vars: BTreeSet<Var> = pb.keys().chain(db.keys()).copied().collect();
        let bounds: BTreeMap<Var, (i64, i64)> = vars
            .iter()
            .map(|v| {
                let (plo, phi) = pb.get(v).copied().unwrap_or((0, 0));
                let (dlo, dhi) = db.get(v).copied().unwrap_or((0, 0));
                (*v, (plo - dhi, phi - dlo))
            })
            .collect();
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lm_inv = lm.inv();
        let mut rem = self.clone();
        let mut quo = LaurentPoly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let t = m.mul(&lm_inv);
            let inside = bounds.iter().all(|(v, &(lo, hi))| {
                let e = t.doubled(*v);
                lo <= e && e <= hi
            }) && t.iter().all(|(v, _)| bounds.contains_key(&v));
            if !inside {
                return None;
            }
            let tc = &c / &lc;
            rem = &rem - &d.mul_monomial(&t).scale(&tc);
            quo.add_term(t, tc);
        }
        Some(quo)
    }

    /// Substitute every variable by a monomial.
    pub fn substitute_monomial(&self, map: &BTreeMap<Var, Monomial>) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut acc: BTreeMap<Var, i64> = BTreeMap::new();
            for (v, e) in m.iter() {
                let image = map.get(&v).ok_or(Error::UnmappedVariable(v))?;
                for (w, f) in image.iter() {
                    *acc.entry(w).or_insert(0) += e * f;
                }
            }
            let mut doubled = Vec::with_capacity(acc.len());
            for (w, s) in acc {
                if s % 2 != 0 {
                    return Err(Error::NonIntegralExponent);
                }
                doubled.push((w, s / 2));
            }
            out.add_term(Monomial::from_doubled(doubled), c.clone());
        }
        Ok(out)
    }

    /// Substitute variables by Laurent polynomials (integer exponents only
    /// for non-monomial images). Unmapped variables are kept.
    pub fn substitute(&self, map: &BTreeMap<Var, LaurentPoly>) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = LaurentPoly::constant(c.clone());
            for (v, e) in m.iter() {
                match map.get(&v) {
                    None => acc = acc.mul_monomial(&Monomial::from_doubled([(v, e)])),
                    Some(img) => {
                        if e % 2 != 0 {
                            let mono = img.as_monomial().ok_or(Error::NonIntegralExponent)?;
                            let sq: Vec<(Var, i64)> = mono.iter().map(|(w, f)| (w, f * e)).collect();
                            if sq.iter().any(|(_, f)| f % 2 != 0) {
                                return Err(Error::NonIntegralExponent);
                            }
                            acc = acc.mul_monomial(&Monomial::from_doubled(sq.into_iter().map(|(w, f)| (w, f / 2))));
                        } else {
                            acc = &acc * &img.pow(e / 2)?;
                        }
                    }
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Exact evaluation at a point with positive rational coordinates.
    pub fn eval(&self, point: &BTreeMap<Var, Rat>) -> Result<Rat> {
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let x = point.get(&v).ok_or(Error::UnmappedVariable(v))?;
                if e % 2 == 0 {
                    t *= pow_rat(x, e / 2);
                } else {
                    let r = sqrt_rat(x).ok_or(Error::NonPerfectSquare)?;
                    t *= pow_rat(&r, e);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Terms sorted by decreasing lexicographic exponent order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.lex_cmp(a.0));
        v
    }

    /// Render as `num/den` with a factored monomial denominator.
    pub fn render(&self, name: &dyn Fn(Var) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut den: Vec<(Var, i64)> = Vec::new();
        for v in self.vars() {
            let lo = self.terms.keys().map(|m| m.doubled(v)).min().unwrap_or(0);
            if lo < 0 {
                den.push((v, -lo));
            }
        }
        let den = Monomial::from_doubled(den);
        let num = self.mul_monomial(&den);
        let terms = num.sorted_terms();
        let mut s = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let body = render_monomial(m, name);
            if a.is_one() {
                s.push_str(if body.is_empty() { "1" } else { &body });
            } else {
                if a.is_integer() {
                    s.push_str(&a.to_string());
                } else {
                    s.push_str(&format!("({})", a));
                }
                s.push_str(&body);
            }
        }
        if den.is_one() {
            return s;
        }
        let num_str = if terms.len() > 1 { format!("({})", s) } else { s };
        let den_str = render_monomial(&den, name);
        let multi = den.iter().count() > 1 || den.iter().any(|(_, e)| e != 2);
        if multi {
            format!("{}/({})", num_str, den_str)
        } else {
            format!("{}/{}", num_str, den_str)
        }
    }
}

fn render_monomial(m: &Monomial, name: &dyn Fn(Var) -> String) -> String {
    let mut s = String::new();
    for (v, e) in m.iter() {
        s.push_str(&name(v));
        if e == 2 {
            continue;
        }
        if e % 2 == 0 {
            let k = e / 2;
            if (0..10).contains(&k) {
                s.push_str(&format!("^{}", k));
            } else {
                s.push_str(&format!("^{{{}}}", k));
            }
        } else {
            s.push_str(&format!("^{{{}/2}}", e));
        }
    }
    s
}

pub fn pow_rat(x: &Rat, n: i64) -> Rat {
    if n >= 0 {
        num_traits::pow(x.clone(), n as usize)
    } else {
        num_traits::pow(x.recip(), (-n) as usize)
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn sqrt_rat(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|v| format!("x{}", v)))
    }
}

/// Quotient of two Laurent polynomials; the X-side mutation leaves the
/// Laurent ring, so symbolic X-charts hold these.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl RatFunc {
    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFunc { num: p, den: LaurentPoly::one() }
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        RatFunc { num, den }.simplified()
    }

    fn simplified(self) -> Self {
        if self.den.is_one() {
            return self;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            return RatFunc::from_poly(q);
        }
        self
    }

    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn recip(&self) -> RatFunc {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn add_one(&self) -> RatFunc {
        RatFunc::new(&self.num + &self.den, self.den.clone())
    }

    pub fn pow(&self, n: i64) -> RatFunc {
        let b = if n < 0 { self.recip() } else { self.clone() };
        let k = n.unsigned_abs() as i64;
        RatFunc::new(b.num.pow(k).expect("nonnegative"), b.den.pow(k).expect("nonnegative"))
    }

    pub fn eval(&self, point: &BTreeMap<Var, Rat>) -> Result<Rat> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point)? / d)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &RatFunc) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

/// Arbitrary-size integer as a JSON number when it fits in i64, else a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigNum(pub BigInt);

impl Serialize for BigNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for BigNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            I(i64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::I(n) => Ok(BigNum(BigInt::from(n))),
            Raw::S(s) => s.parse::<BigInt>().map(BigNum).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatJson {
    pub num: BigNum,
    pub den: BigNum,
}

impl From<&Rat> for RatJson {
    fn from(r: &Rat) -> Self {
        RatJson { num: BigNum(r.numer().clone()), den: BigNum(r.denom().clone()) }
    }
}

impl TryFrom<&RatJson> for Rat {
    type Error = Error;
    fn try_from(r: &RatJson) -> Result<Rat> {
        if r.den.0.is_zero() {
            return Err(Error::Schema("zero denominator".into()));
        }
        Ok(Rat::new(r.num.0.clone(), r.den.0.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub num: BigNum,
    pub den: BigNum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<Var>,
    pub terms: Vec<TermJson>,
}

impl From<&LaurentPoly> for PolyJson {
    fn from(p: &LaurentPoly) -> Self {
        let vars: Vec<Var> = p.vars().into_iter().collect();
        let terms = p
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| TermJson {
                exp: vars.iter().map(|&v| m.doubled(v)).collect(),
                num: BigNum(c.numer().clone()),
                den: BigNum(c.denom().clone()),
            })
            .collect();
        PolyJson { vars, terms }
    }
}

impl TryFrom<&PolyJson> for LaurentPoly {
    type Error = Error;
    fn try_from(j: &PolyJson) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::zero();
        for (i, t) in j.terms.iter().enumerate() {
            if t.exp.len() != j.vars.len() {
                return Err(Error::Schema(format!("/terms/{}/exp: expected {} entries", i, j.vars.len())));
            }
            if t.den.0.is_zero() {
                return Err(Error::Schema(format!("/terms/{}/den: zero denominator", i)));
            }
            let m = Monomial::from_doubled(j.vars.iter().copied().zip(t.exp.iter().copied()));
            p.add_term(m, Rat::new(t.num.0.clone(), t.den.0.clone()));
        }
        Ok(p)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        LaurentPoly::try_from(&j).map_err(serde::de::Error::custom)
    }
}
