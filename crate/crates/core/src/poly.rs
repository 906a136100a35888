//! Sparse multivariate polynomial arithmetic over exact integer coefficients.
//!
//! Polynomials live in `Z[x_1, ..., x_n]` where `x_a` is the weight of
//! pseudoline `a`. The coefficient type is generic over [`Coeff`]; the rest
//! of the crate uses the [`crate::Poly`] alias (arbitrary-precision
//! integers). The truncation map [`Polynomial::phi`] replaces every exponent
//! `>= 3` by `2` on the fully expanded canonical form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;

/// 1-based index of an arrangement weight variable `x_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariableId(pub u32);

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Coefficient ring for [`Polynomial`]. Implemented for machine integers and
/// `BigInt`; exact evaluation goes through `to_rational`.
pub trait Coeff:
    Clone
    + Eq
    + Zero
    + One
    + Signed
    + std::ops::Neg<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + fmt::Display
    + fmt::Debug
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;
    fn to_rational(&self) -> BigRational;
}

impl Coeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
}

impl Coeff for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

/// A monomial: sorted `(variable, exponent)` pairs, no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(VariableId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VariableId) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    /// Builds a monomial from `(variable, exponent)` pairs; zero exponents
    /// are dropped and repeated variables accumulated.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VariableId, u32)>) -> Self {
        let mut m: BTreeMap<VariableId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial {
            exps: m.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: VariableId) -> u32 {
        self.exps
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn variables(&self) -> impl Iterator<Item = VariableId> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VariableId, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (va, ea) = self.exps[i];
            let (vb, eb) = other.exps[j];
            match va.cmp(&vb) {
                std::cmp::Ordering::Less => {
                    exps.push((va, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    exps.push((vb, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    exps.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial { exps }
    }

    /// `self / other`, or `None` when some exponent would go negative.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            let mut rem = e;
            while j < other.exps.len() && other.exps[j].0 < v {
                return None; // divisor has a variable we lack
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                let eb = other.exps[j].1;
                if eb > e {
                    return None;
                }
                rem = e - eb;
                j += 1;
            }
            if rem > 0 {
                exps.push((v, rem));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial { exps })
    }

    /// Exponent truncation: every exponent `>= 3` becomes `2`.
    pub fn truncated(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, e.min(2))).collect(),
        }
    }
}

/// Graded order: total degree first, then the monomial with the larger
/// exponent on the smallest differing variable compares as smaller, so
/// `1 < x1 < x2 < x1^2 < x1*x2 < ...`. Deterministic display order for the
/// CLI golden-test contract.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return std::cmp::Ordering::Equal,
                (None, Some(_)) => return std::cmp::Ordering::Greater,
                (Some(_), None) => return std::cmp::Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    std::cmp::Ordering::Less => return std::cmp::Ordering::Less,
                    std::cmp::Ordering::Greater => return std::cmp::Ordering::Greater,
                    std::cmp::Ordering::Equal => {
                        match ea.cmp(&eb) {
                            // more of the smallest variable sorts earlier
                            std::cmp::Ordering::Greater => return std::cmp::Ordering::Less,
                            std::cmp::Ordering::Less => return std::cmp::Ordering::Greater,
                            std::cmp::Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                        }
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A canonical sparse polynomial: map from monomial to nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<C: Coeff> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(C::from_i64(v))
    }

    pub fn var(v: VariableId) -> Self {
        Self::monomial(Monomial::var(v), C::one())
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// The separating-set monomial `prod x_a` over `vars`.
    pub fn product_of_vars(vars: impl IntoIterator<Item = VariableId>) -> Self {
        Self::monomial(Monomial::from_pairs(vars.into_iter().map(|v| (v, 1))), C::one())
    }

    /// `1 - prod x_a^2` over `vars`, the factor attached to a poset element.
    pub fn one_minus_square(vars: impl IntoIterator<Item = VariableId>) -> Self {
        let sq = Self::monomial(
            Monomial::from_pairs(vars.into_iter().map(|v| (v, 2))),
            C::one(),
        );
        Self::one().sub(&sq)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn variables(&self) -> impl Iterator<Item = VariableId> + '_ {
        let mut seen = std::collections::BTreeSet::new();
        self.terms
            .keys()
            .flat_map(|m| m.variables())
            .filter(move |v| seen.insert(*v))
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        Polynomial { terms }
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), -c.clone());
        }
        Polynomial { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                Self::insert_term(&mut terms, ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Polynomial { terms }
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The truncation map: on the fully expanded canonical form, replace
    /// every variable exponent `>= 3` by `2`, then recombine like terms.
    pub fn phi(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            Self::insert_term(&mut terms, m.truncated(), c.clone());
        }
        Polynomial { terms }
    }

    fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Exact division in the integer polynomial ring: returns `r` with
    /// `self = other * r` when such `r` exists, otherwise
    /// [`PolyError::DivisionFailure`]. Used as a structural probe by the
    /// elimination, so failure is an ordinary result value.
    pub fn try_exact_div(&self, other: &Self) -> Result<Self, PolyError> {
        if other.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (lm, lc) = other.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quo = Self::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().expect("nonzero remainder");
            let qm = match rm.try_div(lm) {
                Some(m) => m,
                None => return Err(PolyError::DivisionFailure),
            };
            // integer coefficient division must be exact too
            let q = rc.clone() / lc.clone();
            if q.is_zero() || !(q.clone() * lc.clone() == *rc) {
                return Err(PolyError::DivisionFailure);
            }
            rem = rem.sub(&other.mul_term(&qm, &q));
            Self::insert_term(&mut quo.terms, qm, q);
        }
        Ok(quo)
    }

    /// Exact evaluation at a rational point. Every variable of the
    /// polynomial must be assigned.
    pub fn evaluate(
        &self,
        assignment: &BTreeMap<VariableId, BigRational>,
    ) -> Result<BigRational, PolyError> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut val = c.to_rational();
            for (v, e) in m.iter() {
                let x = assignment
                    .get(&v)
                    .ok_or(PolyError::MissingVariable(v))?;
                for _ in 0..e {
                    val *= x;
                }
            }
            total += val;
        }
        Ok(total)
    }
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    /// Canonical rendering: terms in ascending monomial order, variables as
    /// `x<index>`, exponents as `^k`, factors joined by `*`,
    /// e.g. `1 - x1^2*x2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = abs.is_one();
            if !unit || m.is_one() {
                write!(f, "{}", abs)?;
            }
            for (k, (v, e)) in m.iter().enumerate() {
                if k > 0 || !unit {
                    write!(f, "*")?;
                }
                if e == 1 {
                    write!(f, "{}", v)?;
                } else {
                    write!(f, "{}^{}", v, e)?;
                }
            }
        }
        Ok(())
    }
}
