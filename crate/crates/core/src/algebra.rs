//! Bigraded monomial algebras with Koszul signs and exact normal forms.
//!
//! An [`Algebra`] is a finitely generated bigraded algebra, either
//! commutative (graded-commutative with respect to total degree, with odd
//! squares annihilated) or quantized (free words reduced by the commutation
//! relations stored in [`QRelations`]). Elements of both kinds share the
//! same canonical representation: a finite map from sorted monomials to
//! `Q[hbar]` scalars. For commutative algebras the sorted form is the
//! graded-commutative normal form; for quantized algebras it is the normal
//! order (ghost block, commutative block, momentum block, antighost block).

use crate::error::{CdgaError, Result};
use crate::grading::Bidegree;
use crate::scalar::{Rat, Scalar};
use crate::symbol::{GenId, GenInfo};
use num_traits::One;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// A two-generator rewrite `a * b -> replacement`, used for relations like
/// the determinant relation of SL(2). Both generators must be even,
/// non-invertible and distinct; the replacement must not contain `a*b`
/// again so that rewriting terminates.
#[derive(Clone, Debug)]
pub struct PairRewrite {
    pub a: GenId,
    pub b: GenId,
    pub replacement: Vec<(Monomial, Scalar)>,
}

/// Commutation data of a quantized algebra: for an out-of-order adjacent
/// pair `x y` (with `x` canonically after `y`) the rewrite is
/// `x y = sign * y x + correction`, where `sign` is the Koszul sign of the
/// pair and `correction` is `hbar` times the hatted Poisson bracket.
#[derive(Clone, Default)]
pub struct QRelations {
    pub corrections: HashMap<(GenId, GenId), Vec<(Monomial, Scalar)>>,
}

#[derive(Clone)]
pub enum Mode {
    Commutative { rewrites: Vec<PairRewrite> },
    Quantized(QRelations),
}

pub struct Algebra {
    pub id: u64,
    pub name: String,
    gens: Vec<GenInfo>,
    by_name: HashMap<String, GenId>,
    pub mode: Mode,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, {} gens)", self.name, self.gens.len())
    }
}

impl Algebra {
    /// Builds a commutative algebra from a generator list. Generators are
    /// sorted by their canonical key; ids follow that order.
    pub fn commutative(name: impl Into<String>, mut gens: Vec<GenInfo>) -> Arc<Algebra> {
        gens.sort_by(|a, b| a.key.cmp(&b.key));
        Self::finish(name.into(), gens, Mode::Commutative { rewrites: Vec::new() })
    }

    pub fn commutative_with_rewrites(
        name: impl Into<String>,
        mut gens: Vec<GenInfo>,
        make_rewrites: impl FnOnce(&Algebra) -> Vec<PairRewrite>,
    ) -> Arc<Algebra> {
        gens.sort_by(|a, b| a.key.cmp(&b.key));
        let mut alg = Self::raw(name.into(), gens, Mode::Commutative { rewrites: Vec::new() });
        let rewrites = make_rewrites(&alg);
        alg.mode = Mode::Commutative { rewrites };
        Arc::new(alg)
    }

    /// Builds a quantized algebra; the relation table is filled in by the
    /// caller via the returned builder closure because corrections refer to
    /// monomials of the algebra being built.
    pub fn quantized(
        name: impl Into<String>,
        mut gens: Vec<GenInfo>,
        make_rels: impl FnOnce(&Algebra) -> QRelations,
    ) -> Arc<Algebra> {
        gens.sort_by(|a, b| a.key.cmp(&b.key));
        let mut alg = Self::raw(name.into(), gens, Mode::Commutative { rewrites: Vec::new() });
        let rels = make_rels(&alg);
        alg.mode = Mode::Quantized(rels);
        Arc::new(alg)
    }

    fn raw(name: String, gens: Vec<GenInfo>, mode: Mode) -> Algebra {
        let mut by_name = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            let prev = by_name.insert(g.name.clone(), GenId(i as u32));
            assert!(prev.is_none(), "duplicate generator name `{}`", g.name);
        }
        for w in gens.windows(2) {
            assert!(w[0].key < w[1].key, "duplicate generator key {:?}", w[1].key);
        }
        Algebra {
            id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
            name,
            gens,
            by_name,
            mode,
        }
    }

    fn finish(name: String, gens: Vec<GenInfo>, mode: Mode) -> Arc<Algebra> {
        Arc::new(Self::raw(name, gens, mode))
    }

    pub fn is_commutative(&self) -> bool {
        matches!(self.mode, Mode::Commutative { .. })
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.gens.len() as u32).map(GenId)
    }

    pub fn info(&self, id: GenId) -> &GenInfo {
        &self.gens[id.idx()]
    }

    pub fn by_name(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn gens(&self) -> &[GenInfo] {
        &self.gens
    }

    pub fn monomial_bidegree(&self, m: &Monomial) -> Bidegree {
        let mut d = Bidegree::ZERO;
        for &(g, k) in &m.0 {
            d = d + self.info(g).bidegree.scaled(k);
        }
        d
    }

    fn is_odd(&self, g: GenId) -> bool {
        self.info(g).bidegree.is_odd()
    }

    /// Graded-commutative normal form of a raw factor list: sorts with
    /// Koszul signs, merges exponents, annihilates odd squares, applies the
    /// pair rewrites. Returns the expansion (empty when the result is 0).
    pub(crate) fn normalize_factors(&self, factors: &[(GenId, i32)]) -> Result<Vec<(Monomial, Scalar)>> {
        let rewrites = match &self.mode {
            Mode::Commutative { rewrites } => rewrites,
            Mode::Quantized(_) => return Err(CdgaError::NeedCommutative(self.name.clone())),
        };

        let mut fs: Vec<(GenId, i32)> = factors.iter().filter(|&&(_, k)| k != 0).copied().collect();
        // insertion sort, counting Koszul crossings of odd-degree factors
        let mut sign = 1i8;
        for i in 1..fs.len() {
            let mut j = i;
            while j > 0 && fs[j - 1].0 > fs[j].0 {
                let (a, b) = (fs[j - 1], fs[j]);
                if self.is_odd(a.0) && self.is_odd(b.0) && a.1 % 2 != 0 && b.1 % 2 != 0 {
                    sign = -sign;
                }
                fs.swap(j - 1, j);
                j -= 1;
            }
        }
        // merge equal generators
        let mut merged: Vec<(GenId, i32)> = Vec::with_capacity(fs.len());
        for (g, k) in fs {
            match merged.last_mut() {
                Some((g0, k0)) if *g0 == g => {
                    if self.is_odd(g) {
                        // odd generator squared
                        return Ok(Vec::new());
                    }
                    *k0 += k;
                }
                _ => merged.push((g, k)),
            }
        }
        merged.retain(|&(_, k)| k != 0);
        for &(g, k) in &merged {
            if k < 0 && !self.info(g).invertible {
                return Err(CdgaError::NegativePower(self.info(g).name.clone()));
            }
        }

        // pair rewrites (e.g. a*d -> 1 + b*c per SL2 factor), with a worklist
        let mut done: Vec<(Monomial, Scalar)> = Vec::new();
        let mut work: Vec<(Monomial, Scalar)> = vec![(Monomial(merged), Scalar::from_rat(Rat::from_integer(sign.into())))];
        while let Some((m, c)) = work.pop() {
            let hit = rewrites
                .iter()
                .find(|r| m.exponent(r.a) >= 1 && m.exponent(r.b) >= 1);
            match hit {
                None => done.push((m, c)),
                Some(r) => {
                    let mut base = m.clone();
                    base.decrement(r.a);
                    base.decrement(r.b);
                    for (rm, rc) in &r.replacement {
                        // base and rm are disjoint-sorted products of even
                        // generators here; re-run normalization to merge
                        let mut fs = base.0.clone();
                        fs.extend_from_slice(&rm.0);
                        for (m2, c2) in self.normalize_factors(&fs)? {
                            work.push((m2, (&c2 * &c) * rc.clone()));
                        }
                    }
                }
            }
        }
        let mut out: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in done {
            merge_term(&mut out, m, c);
        }
        Ok(out.into_iter().collect())
    }
}

pub(crate) fn merge_term<K: Ord>(map: &mut BTreeMap<K, Scalar>, m: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let v = e.get_mut();
            *v += c;
            if v.is_zero() {
                e.remove();
            }
        }
    }
}

/// A sorted exponent list. The empty monomial is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(pub Vec<(GenId, i32)>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn gen(g: GenId) -> Self {
        Monomial(vec![(g, 1)])
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, g: GenId) -> i32 {
        self.0
            .iter()
            .find(|&&(h, _)| h == g)
            .map(|&(_, k)| k)
            .unwrap_or(0)
    }

    pub fn contains(&self, g: GenId) -> bool {
        self.exponent(g) != 0
    }

    fn decrement(&mut self, g: GenId) {
        for i in 0..self.0.len() {
            if self.0[i].0 == g {
                self.0[i].1 -= 1;
                if self.0[i].1 == 0 {
                    self.0.remove(i);
                }
                return;
            }
        }
        panic!("decrement of absent generator");
    }

    /// Word length counted with multiplicities (absolute exponents).
    pub fn length(&self) -> usize {
        self.0.iter().map(|&(_, k)| k.unsigned_abs() as usize).sum()
    }

    /// Expands the exponent list into a flat word; requires nonnegative
    /// exponents.
    pub fn word(&self) -> Vec<GenId> {
        let mut w = Vec::with_capacity(self.length());
        for &(g, k) in &self.0 {
            assert!(k >= 0, "word expansion of negative exponent");
            for _ in 0..k {
                w.push(g);
            }
        }
        w
    }
}

/// A finite linear combination of monomials with `Q[hbar]` coefficients in
/// a fixed ambient algebra. No zero coefficients are stored.
#[derive(Clone)]
pub struct Element {
    alg: Arc<Algebra>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.alg.id == other.alg.id && self.terms == other.terms
    }
}
impl Eq for Element {}

impl Element {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        Element {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<Algebra>) -> Self {
        Element::scalar(alg, Scalar::one())
    }

    pub fn scalar(alg: &Arc<Algebra>, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        Element {
            alg: alg.clone(),
            terms,
        }
    }

    pub fn gen(alg: &Arc<Algebra>, g: GenId) -> Self {
        Element::from_monomial(alg, Monomial::gen(g), Scalar::one())
    }

    pub fn gen_named(alg: &Arc<Algebra>, name: &str) -> Result<Self> {
        let g = alg.by_name(name).ok_or_else(|| CdgaError::MissingGenerator {
            map: alg.name.clone(),
            gen: name.to_string(),
        })?;
        Ok(Element::gen(alg, g))
    }

    /// A single term from an already-normal monomial. Used internally and
    /// by the quantized layer, which maintains normal order itself.
    pub fn from_monomial(alg: &Arc<Algebra>, m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Element {
            alg: alg.clone(),
            terms,
        }
    }

    /// Builds an element from raw factors, normalizing (commutative mode).
    pub fn from_factors(alg: &Arc<Algebra>, factors: &[(GenId, i32)], c: Scalar) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, s) in alg.normalize_factors(factors)? {
            merge_term(&mut terms, m, (&s).mul(&c));
        }
        Ok(Element {
            alg: alg.clone(),
            terms,
        })
    }

    pub fn from_terms(alg: &Arc<Algebra>, it: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in it {
            merge_term(&mut terms, m, c);
        }
        Element {
            alg: alg.clone(),
            terms,
        }
    }

    pub fn alg(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn same_ambient(&self, other: &Element) -> Result<()> {
        if self.alg.id != other.alg.id {
            return Err(CdgaError::AmbientMismatch {
                expected: self.alg.name.clone(),
                found: other.alg.name.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_ambient(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            merge_term(&mut terms, m.clone(), c.clone());
        }
        Ok(Element {
            alg: self.alg.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(&self.alg);
        }
        Element::from_terms(
            &self.alg,
            self.terms.iter().map(|(m, s)| (m.clone(), s.mul(c))),
        )
    }

    pub fn scale_rat(&self, r: &Rat) -> Element {
        self.scale(&Scalar::from_rat(r.clone()))
    }

    /// Graded-commutative product. Errors on ambient mismatch or quantized
    /// ambient (the quantized product lives in [`crate::quantize`]).
    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.same_ambient(other)?;
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut fs = m1.0.clone();
                fs.extend_from_slice(&m2.0);
                for (m, s) in self.alg.normalize_factors(&fs)? {
                    merge_term(&mut terms, m, (&s).mul(&c1.mul(c2)));
                }
            }
        }
        Ok(Element {
            alg: self.alg.clone(),
            terms,
        })
    }

    pub fn pow(&self, k: i32) -> Result<Element> {
        if k == 0 {
            return Ok(Element::one(&self.alg));
        }
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        let mut acc = Element::one(&self.alg);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Inverts a unit monomial (single term, invertible generators,
    /// constant unit coefficient).
    pub fn invert(&self) -> Result<Element> {
        if self.terms.len() != 1 {
            return Err(CdgaError::NotInvertible(self.to_string()));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if !c.is_unit() {
            return Err(CdgaError::NotInvertible(self.to_string()));
        }
        for &(g, _) in &m.0 {
            if !self.alg.info(g).invertible {
                return Err(CdgaError::NotInvertible(self.to_string()));
            }
        }
        let inv_m = Monomial(m.0.iter().map(|&(g, k)| (g, -k)).collect());
        let c0 = c.eval_zero();
        Ok(Element::from_monomial(
            &self.alg,
            inv_m,
            Scalar::from_rat(Rat::one() / c0),
        ))
    }

    /// Re-normalizes; on an already canonical element this is the identity
    /// (idempotence is part of the contract and is tested).
    pub fn normal_form(&self) -> Result<Element> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            for (m2, s) in self.alg.normalize_factors(&m.0)? {
                merge_term(&mut terms, m2, (&s).mul(c));
            }
        }
        Ok(Element {
            alg: self.alg.clone(),
            terms,
        })
    }

    /// Splits into homogeneous components by bidegree.
    pub fn components(&self) -> BTreeMap<Bidegree, Element> {
        let mut out: BTreeMap<Bidegree, Element> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = self.alg.monomial_bidegree(m);
            out.entry(d)
                .or_insert_with(|| Element::zero(&self.alg))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// The homogeneous component in one bidegree (0 for absent degrees,
    /// including on the zero element).
    pub fn component(&self, d: Bidegree) -> Element {
        Element::from_terms(
            &self.alg,
            self.terms
                .iter()
                .filter(|(m, _)| self.alg.monomial_bidegree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// `Some(bidegree)` when homogeneous and nonzero.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys();
        let first = self.alg.monomial_bidegree(it.next()?);
        for m in it {
            if self.alg.monomial_bidegree(m) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Total degree when homogeneous in total degree (bidegrees may mix).
    pub fn total_degree(&self) -> Option<i32> {
        let mut it = self.terms.keys();
        let first = self.alg.monomial_bidegree(it.next()?).total();
        for m in it {
            if self.alg.monomial_bidegree(m).total() != first {
                return None;
            }
        }
        Some(first)
    }

    /// Canonical JSON form: a sorted list of `{monomial, coeff}` records.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Value};
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<Value> = m
                    .0
                    .iter()
                    .map(|&(g, k)| json!([self.alg.info(g).name, k]))
                    .collect();
                let coeff: Vec<Value> = c
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| !num_traits::Zero::is_zero(*r))
                    .map(|(k, r)| json!([k, crate::json::bigint_json(r.numer()), crate::json::bigint_json(r.denom())]))
                    .collect();
                json!({ "monomial": mono, "coeff": coeff })
            })
            .collect();
        Value::Array(terms)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = format!("{}", c);
            let needs_parens = coeff.contains('+') || coeff.contains(" - ");
            if m.is_unit() {
                write!(f, "{}", coeff)?;
            } else {
                if needs_parens {
                    write!(f, "({})*", coeff)?;
                } else if coeff == "-1" {
                    write!(f, "-")?;
                } else if coeff != "1" {
                    write!(f, "{}*", coeff)?;
                }
                let mut firstg = true;
                for &(g, k) in &m.0 {
                    if !firstg {
                        write!(f, "*")?;
                    }
                    firstg = false;
                    if k == 1 {
                        write!(f, "{}", self.alg.info(g).name)?;
                    } else {
                        write!(f, "{}^{}", self.alg.info(g).name, k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::Bidegree;
    use crate::symbol::{Block, GenKey, Tag};

    fn theta_t_algebra() -> Arc<Algebra> {
        // two ghosts, one coordinate, one antighost
        Algebra::commutative(
            "test",
            vec![
                GenInfo::new("th0", GenKey::new(Block::Ghost, 0, Tag::None, 0), Bidegree::new(1, 0)),
                GenInfo::new("th1", GenKey::new(Block::Ghost, 0, Tag::None, 1), Bidegree::new(1, 0)),
                GenInfo::new("x", GenKey::plain(Block::Coord, 0), Bidegree::ZERO),
                GenInfo::new("t", GenKey::plain(Block::Antighost, 0), Bidegree::new(0, 1)),
            ],
        )
    }

    #[test]
    fn ghost_transposition_sign() {
        // th1 * th0 -> -th0 * th1
        let alg = theta_t_algebra();
        let th0 = alg.by_name("th0").unwrap();
        let th1 = alg.by_name("th1").unwrap();
        let e = Element::from_factors(&alg, &[(th1, 1), (th0, 1)], Scalar::one()).unwrap();
        let expected = Element::from_factors(&alg, &[(th0, 1), (th1, 1)], Scalar::from_int(-1)).unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn antighost_ghost_sign_and_odd_square() {
        // |t| = -1, |th| = +1: t*th = -th*t ; t*t = 0
        let alg = theta_t_algebra();
        let th0 = alg.by_name("th0").unwrap();
        let t = alg.by_name("t").unwrap();
        let tth = Element::from_factors(&alg, &[(t, 1), (th0, 1)], Scalar::one()).unwrap();
        let tht = Element::from_factors(&alg, &[(th0, 1), (t, 1)], Scalar::from_int(-1)).unwrap();
        assert_eq!(tth, tht);
        let tt = Element::from_factors(&alg, &[(t, 1), (t, 1)], Scalar::one()).unwrap();
        assert!(tt.is_zero());
    }

    #[test]
    fn unit_law_and_idempotence() {
        let alg = theta_t_algebra();
        let x = Element::gen_named(&alg, "x").unwrap();
        let one = Element::one(&alg);
        assert_eq!(one.mul(&x).unwrap(), x);
        let nf = x.normal_form().unwrap();
        assert_eq!(nf.normal_form().unwrap(), nf);
    }

    #[test]
    fn difference_of_squares_with_hbar() {
        let alg = theta_t_algebra();
        let x = Element::gen_named(&alg, "x").unwrap();
        let hy = x.scale(&Scalar::hbar());
        let p = x.add(&hy).unwrap().mul(&x.sub(&hy).unwrap()).unwrap();
        let x2 = x.mul(&x).unwrap();
        let expected = x2.sub(&x2.scale(&Scalar::hbar_pow(Rat::one(), 2))).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn mixed_square_expansion() {
        // (x + t)^2 = x^2 + 2xt since t^2 = 0 and |x| = 0
        let alg = theta_t_algebra();
        let x = Element::gen_named(&alg, "x").unwrap();
        let t = Element::gen_named(&alg, "t").unwrap();
        let s = x.add(&t).unwrap();
        let sq = s.mul(&s).unwrap();
        let expected = x
            .mul(&x)
            .unwrap()
            .add(&x.mul(&t).unwrap().scale(&Scalar::from_int(2)))
            .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn ambient_mismatch_rejected() {
        let a1 = theta_t_algebra();
        let a2 = theta_t_algebra();
        let x1 = Element::gen_named(&a1, "x").unwrap();
        let x2 = Element::gen_named(&a2, "x").unwrap();
        assert!(x1.mul(&x2).is_err());
    }

    #[test]
    fn zero_component_queries() {
        let alg = theta_t_algebra();
        let z = Element::zero(&alg);
        assert!(z.component(Bidegree::new(1, 0)).is_zero());
        assert_eq!(z.bidegree(), None);
    }

    #[test]
    fn normal_form_idempotent_and_multiply_associative_on_random_triples() {
        let alg = theta_t_algebra();
        let mut rng = crate::rng::Rng::new(23);
        let ids: Vec<_> = alg.gen_ids().collect();
        let mut sample = |rng: &mut crate::rng::Rng| {
            let mut acc = Element::zero(&alg);
            for _ in 0..(1 + rng.below(2)) {
                let mut fs = Vec::new();
                for _ in 0..(1 + rng.below(3)) {
                    fs.push((*rng.pick(&ids), 1));
                }
                let c = Scalar::from_rat(rng.small_rat());
                acc = acc.add(&Element::from_factors(&alg, &fs, c).unwrap()).unwrap();
            }
            acc
        };
        for _ in 0..40 {
            let x = sample(&mut rng);
            let y = sample(&mut rng);
            let z = sample(&mut rng);
            let xy_z = x.mul(&y).unwrap().mul(&z).unwrap();
            let x_yz = x.mul(&y.mul(&z).unwrap()).unwrap();
            assert_eq!(xy_z, x_yz);
            let nf = xy_z.normal_form().unwrap();
            assert_eq!(nf, xy_z);
            assert_eq!(nf.normal_form().unwrap(), nf);
        }
    }

    #[test]
    fn koszul_commutativity_on_random_pairs() {
        let alg = theta_t_algebra();
        let mut rng = crate::rng::Rng::new(11);
        let ids: Vec<_> = alg.gen_ids().collect();
        for _ in 0..50 {
            let mut fs = Vec::new();
            for _ in 0..(1 + rng.below(3)) {
                fs.push((*rng.pick(&ids), 1));
            }
            let mut gs = Vec::new();
            for _ in 0..(1 + rng.below(3)) {
                gs.push((*rng.pick(&ids), 1));
            }
            let x = Element::from_factors(&alg, &fs, Scalar::one()).unwrap();
            let y = Element::from_factors(&alg, &gs, Scalar::one()).unwrap();
            let (Some(dx), Some(dy)) = (x.bidegree(), y.bidegree()) else {
                continue;
            };
            let xy = x.mul(&y).unwrap();
            let yx = y.mul(&x).unwrap();
            let sign = crate::grading::koszul_sign(dx, dy);
            assert_eq!(xy, yx.scale(&Scalar::from_int(sign as i64)));
        }
    }
}
