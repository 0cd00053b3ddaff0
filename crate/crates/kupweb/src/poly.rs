//! Laurent polynomials in `A` and the module of graph polynomials: finitely
//! supported maps from products of reduced graphs to Laurent coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::web::CanonicalKey;

/// Coefficient rings we compute in: `i64` for sl(3) and the parity bracket,
/// `Rational64` for G2 (the crossing expansion introduces powers of 1/2).
pub trait Coeff:
    Clone
    + Eq
    + Ord
    + fmt::Display
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl Coeff for i64 {}
impl Coeff for Rational64 {}

/// A Laurent polynomial in the variable `A` with coefficients in `C`.
/// No zero coefficients are ever stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPoly<C: Coeff = i64> {
    terms: BTreeMap<i32, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::mono(0, C::one())
    }

    /// The monomial `c·A^exp`.
    pub fn mono(exp: i32, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: i32, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut p = Self::zero();
        for (e, k) in &self.terms {
            p.add_term(*e, k.clone() * c.clone());
        }
        p
    }

    /// Multiply by `A^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Evaluate at `A = a` where `a` is `1` or `-1`; the result is a constant.
    pub fn eval_at_sign(&self, a: i8) -> C {
        assert!(a == 1 || a == -1, "only A = ±1 evaluation is supported");
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            if a == 1 || e.rem_euclid(2) == 0 {
                acc = acc + c.clone();
            } else {
                acc = acc - c.clone();
            }
        }
        acc
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == 0)
    }

    pub fn pow(&self, mut n: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, C::zero() - c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, C::zero() - c.clone())).collect() }
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest power first
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*A")?,
                _ => write!(f, "{c}*A^{e}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A commutative product of reduced-graph classes; the empty product is the
/// scalar unit.  Disjoint unions of graphs are recorded as products.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GraphMonomial {
    factors: Vec<CanonicalKey>, // kept sorted
}

impl GraphMonomial {
    pub fn unit() -> Self {
        GraphMonomial { factors: Vec::new() }
    }

    pub fn from_keys(mut keys: Vec<CanonicalKey>) -> Self {
        keys.sort();
        GraphMonomial { factors: keys }
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[CanonicalKey] {
        &self.factors
    }

    pub fn mul(&self, other: &GraphMonomial) -> GraphMonomial {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        factors.sort();
        GraphMonomial { factors }
    }
}

impl fmt::Display for GraphMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, k) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "[{}]", k.short_hex())?;
        }
        Ok(())
    }
}

/// An element of the module of graph polynomials: a finitely supported map
/// from graph monomials to Laurent polynomials.  No zero values are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GraphPolynomial<C: Coeff = i64> {
    terms: BTreeMap<GraphMonomial, LaurentPoly<C>>,
}

impl<C: Coeff> GraphPolynomial<C> {
    pub fn zero() -> Self {
        GraphPolynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(LaurentPoly::one())
    }

    /// A scalar element `p·1`.
    pub fn scalar(p: LaurentPoly<C>) -> Self {
        Self::single(GraphMonomial::unit(), p)
    }

    pub fn single(m: GraphMonomial, p: LaurentPoly<C>) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(m, p);
        }
        GraphPolynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the support is contained in the empty monomial.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(GraphMonomial::is_unit)
    }

    pub fn scalar_part(&self) -> LaurentPoly<C> {
        self.terms.get(&GraphMonomial::unit()).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GraphMonomial, &LaurentPoly<C>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_assign_term(&mut self, m: GraphMonomial, p: &LaurentPoly<C>) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(LaurentPoly::zero);
        *entry = &*entry + p;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, p) in &rhs.terms {
            out.add_assign_term(m.clone(), p);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, p) in &rhs.terms {
            out.add_assign_term(m.clone(), &-p);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, p1) in &self.terms {
            for (m2, p2) in &rhs.terms {
                out.add_assign_term(m1.mul(m2), &(p1 * p2));
            }
        }
        out
    }

    /// Scale by a Laurent polynomial.
    pub fn scale(&self, p: &LaurentPoly<C>) -> Self {
        let mut out = Self::zero();
        for (m, q) in &self.terms {
            out.add_assign_term(m.clone(), &(p * q));
        }
        out
    }

    pub fn scale_coeff(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, q) in &self.terms {
            out.add_assign_term(m.clone(), &q.scale(c));
        }
        out
    }

    /// Collapse every Laurent coefficient to its value at `A = a ∈ {1,-1}`.
    pub fn evaluate_a(&self, a: i8) -> Self {
        let mut out = Self::zero();
        for (m, p) in &self.terms {
            out.add_assign_term(m.clone(), &LaurentPoly::mono(0, p.eval_at_sign(a)));
        }
        out
    }
}

impl<C: Coeff> fmt::Display for GraphPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})·{m}")?;
        }
        Ok(())
    }
}

/// JSON export: `{"terms":[{"graphs":[hex...],"poly":[[exp,num,den]...]}...]}`
/// with `den` omitted when it is 1.  Integer coefficients always omit `den`.
pub trait CoeffJson: Coeff {
    fn to_json(&self) -> (i64, Option<i64>);
}

impl CoeffJson for i64 {
    fn to_json(&self) -> (i64, Option<i64>) {
        (*self, None)
    }
}

impl CoeffJson for Rational64 {
    fn to_json(&self) -> (i64, Option<i64>) {
        let d = *self.denom();
        (*self.numer(), if d == 1 { None } else { Some(d) })
    }
}

impl<C: CoeffJson> GraphPolynomial<C> {
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, p)| {
                let graphs: Vec<serde_json::Value> =
                    m.factors().iter().map(|k| serde_json::Value::String(k.hex())).collect();
                let poly: Vec<serde_json::Value> = p
                    .terms()
                    .map(|(e, c)| {
                        let (num, den) = c.to_json();
                        match den {
                            None => serde_json::json!([e, num]),
                            Some(d) => serde_json::json!([e, num, d]),
                        }
                    })
                    .collect();
                serde_json::json!({ "graphs": graphs, "poly": poly })
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = LaurentPoly<i64>;

    fn a_pow(e: i32) -> P {
        P::mono(e, 1)
    }

    #[test]
    fn add_zero_is_identity() {
        let p = P::from_terms([(6, 1), (0, 1), (-6, 1)]);
        assert_eq!(&p + &P::zero(), p);
    }

    #[test]
    fn mono_inverse_cancels() {
        assert_eq!(&a_pow(1) * &a_pow(-1), P::one());
    }

    #[test]
    fn eval_at_signs() {
        let p = P::from_terms([(6, 1), (0, 1), (-6, 1)]);
        assert_eq!(p.eval_at_sign(1), 3);
        let q = P::from_terms([(3, 1), (-3, 1)]);
        assert_eq!(q.eval_at_sign(-1), -2);
    }

    #[test]
    fn graph_polynomial_scalar_tests() {
        let gp = GraphPolynomial::<i64>::scalar(a_pow(8));
        assert!(gp.is_scalar());
        assert!(GraphPolynomial::<i64>::zero().is_scalar());
        let key = CanonicalKey::from_bytes(vec![1, 2, 3]);
        let m = GraphMonomial::from_keys(vec![key]);
        let gp2 = GraphPolynomial::single(m, P::one());
        assert!(!gp2.is_scalar());
    }

    #[test]
    fn evaluate_idempotent() {
        let key = CanonicalKey::from_bytes(vec![9]);
        let m = GraphMonomial::from_keys(vec![key]);
        let mut gp = GraphPolynomial::single(m, P::from_terms([(2, 3), (-1, 1)]));
        gp = gp.add(&GraphPolynomial::scalar(P::from_terms([(5, -2), (0, 7)])));
        let once = gp.evaluate_a(1);
        assert_eq!(once.evaluate_a(1), once);
    }

    #[test]
    fn json_shape() {
        let gp = GraphPolynomial::<i64>::scalar(P::from_terms([(6, 1), (0, 1), (-6, 1)]));
        let v = gp.to_json();
        assert_eq!(v["terms"][0]["poly"][0][0], -6);
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        prop::collection::vec((-8i32..8, -5i64..5), 0..6)
            .prop_map(|ts| P::from_terms(ts.into_iter()))
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&p * &P::one(), p.clone());
        }

        #[test]
        fn scale_distributes(p in arb_poly(), q in arb_poly(), c in -5i64..5) {
            let lhs = (&p + &q).scale(&c);
            let rhs = &p.scale(&c) + &q.scale(&c);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn eval_commutes_with_ops(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!((&p + &q).eval_at_sign(-1), p.eval_at_sign(-1) + q.eval_at_sign(-1));
            prop_assert_eq!((&p * &q).eval_at_sign(-1), p.eval_at_sign(-1) * q.eval_at_sign(-1));
        }

        #[test]
        fn no_stored_zeros(p in arb_poly(), q in arb_poly()) {
            let r = &p - &q;
            prop_assert!(r.terms().all(|(_, c)| *c != 0));
            let s = &p * &q;
            prop_assert!(s.terms().all(|(_, c)| *c != 0));
        }
    }
}
