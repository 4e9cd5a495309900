//! Sparse multivariate polynomials with `Q(sqrt5)` coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{AlgebraError, Q5Matrix, Q5Scalar};

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with `x1 > x2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `degree` in `nvars` variables, largest first.
pub fn homogeneous_monomials(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, nvars: usize, left: u32, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(prefix, nvars, left - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(&mut Vec::with_capacity(nvars), nvars, degree, &mut out);
    out
}

/// Polynomial in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q5Scalar>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q5Scalar) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::term(Monomial::var(nvars, i), Q5Scalar::one())
    }

    pub fn term(mono: Monomial, c: Q5Scalar) -> Self {
        let mut p = Self::zero(mono.nvars());
        p.add_term(mono, c);
        p
    }

    /// Sums the given terms; repeated monomials are merged.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Q5Scalar)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    /// Linear form `sum_j coeffs[j] * x_j`.
    pub fn linear_form(coeffs: &[Q5Scalar]) -> Self {
        let n = coeffs.len();
        Self::from_terms(n, coeffs.iter().enumerate().map(|(j, c)| (Monomial::var(n, j), c.clone())))
    }

    pub fn add_term(&mut self, mono: Monomial, c: Q5Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q5Scalar)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Q5Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(Q5Scalar::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q5Scalar)> {
        self.terms.iter().next_back()
    }

    /// Total degree; the zero polynomial reports degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn constant_term(&self) -> Q5Scalar {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn scale(&self, s: &Q5Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.inv().expect("stored coefficients are nonzero")),
            None => self.clone(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(self.nvars, Q5Scalar::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * &Q5Scalar::from_int(e as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<SparsePoly> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Substitutes `x_i -> images[i]`. Every image must share one arity, which
    /// becomes the arity of the result.
    pub fn substitute(&self, images: &[SparsePoly]) -> Result<Self, AlgebraError> {
        if images.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: images.len() });
        }
        let out_vars = match images.first() {
            Some(p) => p.nvars,
            None => 0,
        };
        if let Some(bad) = images.iter().find(|p| p.nvars != out_vars) {
            return Err(AlgebraError::DimensionMismatch { expected: out_vars, found: bad.nvars });
        }
        // powers[i][e] = images[i]^e, filled on demand.
        let mut powers: Vec<Vec<SparsePoly>> =
            images.iter().map(|_| vec![Self::constant(out_vars, Q5Scalar::one())]).collect();
        let mut out = Self::zero(out_vars);
        for (m, c) in &self.terms {
            let mut acc = Self::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().expect("nonempty") * &images[i];
                    powers[i].push(next);
                }
                acc = &acc * &powers[i][e as usize];
            }
            out += &acc;
        }
        Ok(out)
    }

    /// `q(x) = p(M x)`.
    pub fn compose_linear(&self, m: &Q5Matrix) -> Result<Self, AlgebraError> {
        if !m.is_square() {
            return Err(AlgebraError::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        if m.cols() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: m.cols() });
        }
        let images: Vec<SparsePoly> = (0..m.rows()).map(|i| Self::linear_form(m.row(i))).collect();
        self.substitute(&images)
    }

    pub fn eval(&self, x: &[Q5Scalar]) -> Q5Scalar {
        assert_eq!(x.len(), self.nvars, "point has wrong dimension");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().zip(x).filter(|(e, _)| **e > 0).fold(c.clone(), |acc, (e, xi)| &acc * &xi.pow(*e))
            })
            .sum()
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars, "point has wrong dimension");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(x)
                    .filter(|(e, _)| **e > 0)
                    .fold(c.to_f64(), |acc, (e, xi)| acc * xi.powi(*e as i32))
            })
            .sum()
    }

    /// Coefficients listed against `basis`. Terms outside `basis` are ignored.
    pub fn coefficient_vector(&self, basis: &[Monomial]) -> Vec<Q5Scalar> {
        basis.iter().map(|m| self.coefficient(m)).collect()
    }

    pub fn to_text(&self, names: &[&str]) -> String {
        super::text::format_poly(self, names)
    }
}

impl std::fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&super::text::format_poly(self, &refs))
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl AddAssign<&SparsePoly> for SparsePoly {
    fn add_assign(&mut self, rhs: &SparsePoly) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = SparsePoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}
