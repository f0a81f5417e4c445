//! Sparse multivariate polynomials in `X_0, X_1, …` with arbitrary
//! precision integer coefficients, plus the closed-form products the
//! enumerations are compared against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chains::FactorizationType;
use crate::error::{Error, Result};

/// A product of variables, stored as `(index, exponent)` pairs sorted by
/// index with positive exponents.
///
/// Monomials are ordered graded-lexicographically: by total degree, then
/// by exponent vector compared from `X_0` upwards, so `X1 > X2`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: u32) -> Self {
        Monomial(vec![(i, 1)])
    }

    /// Builds a monomial from `(index, exponent)` pairs; zero exponents are
    /// dropped and repeated indices are merged.
    pub fn from_exponents<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    /// Square-free monomial with `X_i` for every set bit `i`.
    pub fn from_mask(mask: u64) -> Self {
        Monomial(
            crate::ncpart::mask_elements(mask)
                .map(|i| (i as u32, 1))
                .collect(),
        )
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn exponent(&self, var: u32) -> u32 {
        self.0
            .iter()
            .find(|&&(v, _)| v == var)
            .map_or(0, |&(_, e)| e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, var: u32) -> bool {
        self.exponent(var) > 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_exponents(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // walk both sparse exponent vectors from the smallest index
            let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
            loop {
                match (a.peek(), b.peek()) {
                    (None, None) => return std::cmp::Ordering::Equal,
                    (Some(_), None) => return std::cmp::Ordering::Greater,
                    (None, Some(_)) => return std::cmp::Ordering::Less,
                    (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                        if va != vb {
                            return vb.cmp(&va);
                        }
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        a.next();
                        b.next();
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let factors: Vec<String> = self
            .0
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    format!("X{v}")
                } else {
                    format!("X{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", factors.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A polynomial with integer coefficients; zero coefficients are never
/// stored, so equality is structural.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), c.into());
        p
    }

    pub fn var(i: u32) -> Self {
        Polynomial::monomial(Monomial::var(i), 1)
    }

    pub fn monomial<T: Into<BigInt>>(m: Monomial, c: T) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c.into());
        p
    }

    /// `a·X_var + b`.
    pub fn linear<A: Into<BigInt>, B: Into<BigInt>>(var: u32, a: A, b: B) -> Self {
        let mut p = Polynomial::constant(b);
        p.add_term(Monomial::var(var), a.into());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn evaluate<F: Fn(u32) -> BigInt>(&self, value: F) -> BigInt {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                t *= num_traits::pow(value(v), e as usize);
            }
            total += t;
        }
        total
    }

    /// Evaluation with every variable set to `x`.
    pub fn evaluate_all<T: Into<BigInt>>(&self, x: T) -> BigInt {
        let x = x.into();
        self.evaluate(|_| x.clone())
    }

    /// Substitutes the constant `value` for `X_var`.
    pub fn specialize<T: Into<BigInt>>(&self, var: u32, value: T) -> Polynomial {
        let value = value.into();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            let rest = Monomial(m.0.iter().copied().filter(|&(v, _)| v != var).collect());
            out.add_term(rest, c * num_traits::pow(value.clone(), e as usize));
        }
        out
    }

    /// Renames every variable through `f`.
    pub fn rename_vars<F: Fn(u32) -> u32>(&self, f: F) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let renamed = Monomial::from_exponents(m.0.iter().map(|&(v, e)| (f(v), e)));
            out.add_term(renamed, c.clone());
        }
        out
    }

    /// Divides every coefficient by `d`, or returns `None` if some
    /// coefficient is not a multiple of `d`.
    pub fn div_exact(&self, d: &BigInt) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if !(c % d).is_zero() {
                return None;
            }
            out.terms.insert(m.clone(), c / d);
        }
        Some(out)
    }

    pub fn scale<T: Into<BigInt>>(&self, k: T) -> Polynomial {
        let k = k.into();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * &k);
        }
        out
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Polynomial>>(factors: I) -> Polynomial {
        factors
            .into_iter()
            .fold(Polynomial::one(), |acc, p| &acc * p)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        iter.fold(Polynomial::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl fmt::Display for Polynomial {
    /// Terms in descending graded-lex order, e.g. `2*X1*X2 + 2*X1 + 6*X2 + 6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    vars: BTreeMap<u32, u32>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                coeff: c.to_string(),
                vars: m.0.iter().copied().collect(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let mut p = Polynomial::zero();
        for t in terms {
            let c: BigInt = t.coeff.parse().map_err(serde::de::Error::custom)?;
            if t.vars.values().any(|&e| e == 0) {
                return Err(serde::de::Error::custom("zero exponent"));
            }
            p.add_term(Monomial(t.vars.into_iter().collect()), c);
        }
        Ok(p)
    }
}

/// `∏_{i=1}^{r-1} (b_i X_i + n − b_i)` with `b_i = Σ_{j≤i}(a_j − 1)`.
pub fn theorem1_rhs(a: &FactorizationType) -> Polynomial {
    let n = a.n() as i64;
    let factors: Vec<Polynomial> = (1..a.r())
        .map(|i| {
            let b = a.b(i) as i64;
            Polynomial::linear(i as u32, b, n - b)
        })
        .collect();
    Polynomial::product(&factors)
}

/// `∏_{i=1}^{n-1} (i X_i + n + 1 − i)`, the André tree hook sum.
pub fn hook_rhs(n: usize) -> Polynomial {
    let n = n as i64;
    let factors: Vec<Polynomial> = (1..n)
        .map(|i| Polynomial::linear(i as u32, i, n + 1 - i))
        .collect();
    Polynomial::product(&factors)
}

/// `∏_{i=1}^{n-2} (i X_i + n − i)`, shared by maximal chains and Cayley
/// trees on `n` vertices.
pub fn maximal_chain_rhs(n: usize) -> Polynomial {
    let n = n as i64;
    let factors: Vec<Polynomial> = (1..n - 1)
        .map(|i| Polynomial::linear(i as u32, i, n - i))
        .collect();
    Polynomial::product(&factors)
}

/// `(1/n) C(n,k) ∏_{i=n-k}^{n-2} (i X_i + n − i)`, where the `i = 0` factor
/// is the constant `n`. The division is done last and must be exact.
pub fn final_chain_rhs(n: usize, k: usize) -> Result<Polynomial> {
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!(
            "final chains need 2 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    let ni = n as i64;
    let factors: Vec<Polynomial> = ((n - k)..=(n - 2))
        .map(|i| Polynomial::linear(i as u32, i as i64, ni - i as i64))
        .collect();
    // X_0 carries coefficient 0, so that factor is the constant n
    let factors: Vec<Polynomial> = factors.into_iter().map(|p| p.specialize(0, 0)).collect();
    let full = Polynomial::product(&factors).scale(binomial(BigInt::from(n), BigInt::from(k)));
    full.div_exact(&BigInt::from(n)).ok_or_else(|| {
        Error::Internal(format!(
            "final chain product for n = {n}, k = {k} is not divisible by n"
        ))
    })
}
