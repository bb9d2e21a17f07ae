//! Derivations and graded algebra maps, given on generators and extended
//! to products.
//!
//! A [`Derivation`] of bidegree `(p, q)` extends by the graded Leibniz rule
//! with respect to total degree:
//! `D(g1...gk) = sum_i (-1)^{|D|(|g1|+...+|g_{i-1}|)} g1...D(gi)...gk`.
//! A [`GradedMap`] extends multiplicatively. Since all structural
//! identities of this crate are identities between derivations or algebra
//! maps, checking them on generators is sound and complete; the random
//! product checks in the suites are redundant smoke tests.

use crate::algebra::{Algebra, Element};
use crate::error::{CdgaError, Result};
use crate::grading::Bidegree;
use crate::symbol::GenId;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone)]
pub struct Derivation {
    pub name: String,
    pub bidegree: Bidegree,
    pub alg: Arc<Algebra>,
    table: HashMap<GenId, Element>,
}

impl Derivation {
    pub fn new(
        name: impl Into<String>,
        alg: &Arc<Algebra>,
        bidegree: Bidegree,
        table: HashMap<GenId, Element>,
    ) -> Self {
        Derivation {
            name: name.into(),
            bidegree,
            alg: alg.clone(),
            table,
        }
    }

    pub fn zero(name: impl Into<String>, alg: &Arc<Algebra>, bidegree: Bidegree) -> Self {
        Derivation::new(name, alg, bidegree, HashMap::new())
    }

    /// Value on a generator; absent entries are zero maps only when the
    /// table was built as total. We treat absence as zero, which matches
    /// how the constructions fill their tables (differentials vanish on
    /// most generators).
    pub fn on_gen(&self, g: GenId) -> Element {
        self.table
            .get(&g)
            .cloned()
            .unwrap_or_else(|| Element::zero(&self.alg))
    }

    pub fn set(&mut self, g: GenId, value: Element) {
        self.table.insert(g, value);
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.alg().id != self.alg.id {
            return Err(CdgaError::AmbientMismatch {
                expected: self.alg.name.clone(),
                found: x.alg().name.clone(),
            });
        }
        let mut acc = Element::zero(&self.alg);
        for (m, c) in x.terms() {
            acc = acc.add(&self.apply_monomial(&m.0)?.scale(c))?;
        }
        Ok(acc)
    }

    /// Leibniz expansion over a factor list `g1^k1 ... gr^kr`.
    fn apply_monomial(&self, factors: &[(GenId, i32)]) -> Result<Element> {
        if factors.is_empty() {
            return Ok(Element::zero(&self.alg)); // D(1) = 0
        }
        let (g, k) = factors[0];
        let rest = &factors[1..];
        let ginfo = self.alg.info(g);

        // D(g^k) = k g^{k-1} D(g)  (valid for negative k on invertible
        // generators; odd generators only occur with k = 1)
        let dg = self.on_gen(g);
        let mut head = Element::zero(&self.alg);
        if !dg.is_zero() {
            let gk1 = Element::from_factors(&self.alg, &[(g, k - 1)], crate::scalar::Scalar::from_int(k as i64))?;
            head = gk1.mul(&dg)?;
        }
        let rest_elem = Element::from_factors(&self.alg, rest, crate::scalar::Scalar::one())?;
        let mut acc = head.mul(&rest_elem)?;

        if !rest.is_empty() {
            // (-1)^{|D| * k|g|} g^k D(rest)
            let sign = if self.bidegree.is_odd() && ginfo.bidegree.is_odd() && k % 2 != 0 {
                -1i64
            } else {
                1
            };
            let gk = Element::from_factors(&self.alg, &[(g, k)], crate::scalar::Scalar::from_int(sign))?;
            acc = acc.add(&gk.mul(&self.apply_monomial(rest)?)?)?;
        }
        Ok(acc)
    }

    /// Checks `D(D(g)) = 0` on every generator. Requires odd total degree:
    /// then `D^2 = [D,D]/2` is itself a derivation and the generator check
    /// is complete.
    pub fn square_is_zero(&self) -> Result<bool> {
        if !self.bidegree.is_odd() {
            return Err(CdgaError::EvenDerivation(self.name.clone()));
        }
        for g in self.alg.gen_ids() {
            if !self.apply(&self.on_gen(g))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Like [`Derivation::square_is_zero`] but reporting the first failing
    /// generator.
    pub fn square_zero_witness(&self) -> Result<Option<(String, Element)>> {
        if !self.bidegree.is_odd() {
            return Err(CdgaError::EvenDerivation(self.name.clone()));
        }
        for g in self.alg.gen_ids() {
            let d2 = self.apply(&self.on_gen(g))?;
            if !d2.is_zero() {
                return Ok(Some((self.alg.info(g).name.clone(), d2)));
            }
        }
        Ok(None)
    }

    /// Checks `D1 D2 + D2 D1 = 0` on generators (both odd).
    pub fn anticommutes_with(&self, other: &Derivation) -> Result<bool> {
        if !self.bidegree.is_odd() || !other.bidegree.is_odd() {
            return Err(CdgaError::EvenDerivation(format!("{}, {}", self.name, other.name)));
        }
        for g in self.alg.gen_ids() {
            let x = self.apply(&other.on_gen(g))?;
            let y = other.apply(&self.on_gen(g))?;
            if !x.add(&y)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Commutator `[D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1` evaluated on a
    /// generator.
    pub fn commutator_on_gen(&self, other: &Derivation, g: GenId) -> Result<Element> {
        let sign = crate::grading::koszul_sign(self.bidegree, other.bidegree);
        let a = self.apply(&other.on_gen(g))?;
        let b = other.apply(&self.on_gen(g))?;
        a.sub(&b.scale(&crate::scalar::Scalar::from_int(sign as i64)))
    }

    /// Total-degree sum of two derivations of equal bidegree type is not
    /// needed; this adds tables of the same bidegree.
    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        assert_eq!(self.bidegree, other.bidegree);
        let mut table = self.table.clone();
        for g in self.alg.gen_ids() {
            let v = self.on_gen(g).add(&other.on_gen(g))?;
            if v.is_zero() {
                table.remove(&g);
            } else {
                table.insert(g, v);
            }
        }
        Ok(Derivation {
            name: format!("{}+{}", self.name, other.name),
            bidegree: self.bidegree,
            alg: self.alg.clone(),
            table,
        })
    }
}

/// A multiplicative graded map given on generators; source and target may
/// differ. Extension preserves bidegree when the table does.
#[derive(Clone)]
pub struct GradedMap {
    pub name: String,
    pub src: Arc<Algebra>,
    pub dst: Arc<Algebra>,
    table: HashMap<GenId, Element>,
}

impl GradedMap {
    pub fn new(
        name: impl Into<String>,
        src: &Arc<Algebra>,
        dst: &Arc<Algebra>,
        table: HashMap<GenId, Element>,
    ) -> Self {
        GradedMap {
            name: name.into(),
            src: src.clone(),
            dst: dst.clone(),
            table,
        }
    }

    pub fn identity(alg: &Arc<Algebra>) -> Self {
        let table = alg
            .gen_ids()
            .map(|g| (g, Element::gen(alg, g)))
            .collect();
        GradedMap::new("id", alg, alg, table)
    }

    pub fn on_gen(&self, g: GenId) -> Result<Element> {
        self.table
            .get(&g)
            .cloned()
            .ok_or_else(|| CdgaError::MissingGenerator {
                map: self.name.clone(),
                gen: self.src.info(g).name.clone(),
            })
    }

    pub fn set(&mut self, g: GenId, value: Element) {
        self.table.insert(g, value);
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.alg().id != self.src.id {
            return Err(CdgaError::AmbientMismatch {
                expected: self.src.name.clone(),
                found: x.alg().name.clone(),
            });
        }
        let mut acc = Element::zero(&self.dst);
        for (m, c) in x.terms() {
            let mut prod = Element::one(&self.dst);
            for &(g, k) in &m.0 {
                prod = prod.mul(&self.on_gen(g)?.pow(k)?)?;
            }
            acc = acc.add(&prod.scale(c))?;
        }
        Ok(acc)
    }

    /// `self` after `first`: `(self . first)(x) = self(first(x))`.
    pub fn compose(&self, first: &GradedMap) -> Result<GradedMap> {
        if first.dst.id != self.src.id {
            return Err(CdgaError::AmbientMismatch {
                expected: self.src.name.clone(),
                found: first.dst.name.clone(),
            });
        }
        let mut table = HashMap::new();
        for g in first.src.gen_ids() {
            table.insert(g, self.apply(&first.on_gen(g)?)?);
        }
        Ok(GradedMap::new(
            format!("{}.{}", self.name, first.name),
            &first.src,
            &self.dst,
            table,
        ))
    }

    /// Table equality on all generators of the source.
    pub fn equals(&self, other: &GradedMap) -> Result<bool> {
        if self.src.id != other.src.id || self.dst.id != other.dst.id {
            return Ok(false);
        }
        for g in self.src.gen_ids() {
            if self.on_gen(g)? != other.on_gen(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks `phi(d_src(g)) = d_dst(phi(g))` on all generators; returns
    /// the first failing generator.
    pub fn chain_compat_witness(
        &self,
        d_src: &Derivation,
        d_dst: &Derivation,
    ) -> Result<Option<String>> {
        for g in self.src.gen_ids() {
            let lhs = self.apply(&d_src.on_gen(g))?;
            let rhs = d_dst.apply(&self.on_gen(g)?)?;
            if lhs != rhs {
                return Ok(Some(self.src.info(g).name.clone()));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Element;
    use crate::scalar::Scalar;
    use crate::symbol::{Block, GenInfo, GenKey, Tag};

    /// sl2 ghost algebra: three ghosts theta^e, theta^h, theta^f.
    fn sl2_ghosts() -> Arc<Algebra> {
        Algebra::commutative(
            "sl2-ghosts",
            vec![
                GenInfo::new("th_e", GenKey::new(Block::Ghost, 0, Tag::None, 0), Bidegree::new(1, 0)),
                GenInfo::new("th_h", GenKey::new(Block::Ghost, 0, Tag::None, 1), Bidegree::new(1, 0)),
                GenInfo::new("th_f", GenKey::new(Block::Ghost, 0, Tag::None, 2), Bidegree::new(1, 0)),
            ],
        )
    }

    /// The Chevalley-Eilenberg differential of sl2 on its ghost algebra:
    /// delta(theta^a) = -1/2 f^a_{bc} theta^b theta^c with
    /// [h,e] = 2e, [h,f] = -2f, [e,f] = h.
    fn sl2_ce_delta(alg: &Arc<Algebra>) -> Derivation {
        let e = alg.by_name("th_e").unwrap();
        let h = alg.by_name("th_h").unwrap();
        let f = alg.by_name("th_f").unwrap();
        let mut table = HashMap::new();
        // delta(th_e) = -(f^e_{he} th_h th_e + f^e_{eh} th_e th_h)/2 = -2 th_h th_e
        table.insert(
            e,
            Element::from_factors(alg, &[(h, 1), (e, 1)], Scalar::from_int(-2)).unwrap(),
        );
        // delta(th_f) = +2 th_h th_f
        table.insert(
            f,
            Element::from_factors(alg, &[(h, 1), (f, 1)], Scalar::from_int(2)).unwrap(),
        );
        // delta(th_h) = -th_e th_f  (f^h_{ef} = 1, f^h_{fe} = -1)
        table.insert(
            h,
            Element::from_factors(alg, &[(e, 1), (f, 1)], Scalar::from_int(-1)).unwrap(),
        );
        Derivation::new("delta", alg, Bidegree::new(1, 0), table)
    }

    #[test]
    fn sl2_ce_squares_to_zero() {
        let alg = sl2_ghosts();
        let d = sl2_ce_delta(&alg);
        assert!(d.square_is_zero().unwrap());
    }

    #[test]
    fn corrupted_structure_constant_fails() {
        let alg = sl2_ghosts();
        let mut d = sl2_ce_delta(&alg);
        // wrong coefficient on delta(th_e): th_h th_e instead of -2 th_h th_e
        let e = alg.by_name("th_e").unwrap();
        let h = alg.by_name("th_h").unwrap();
        d.set(
            e,
            Element::from_factors(&alg, &[(h, 1), (e, 1)], Scalar::one()).unwrap(),
        );
        assert!(!d.square_is_zero().unwrap());
    }

    #[test]
    fn zero_derivation_squares_to_zero() {
        let alg = sl2_ghosts();
        let d = Derivation::zero("z", &alg, Bidegree::new(1, 0));
        assert!(d.square_is_zero().unwrap());
        assert!(d.apply(&Element::one(&alg)).unwrap().is_zero());
    }

    #[test]
    fn even_derivation_rejected_by_square_check() {
        let alg = sl2_ghosts();
        let d = Derivation::zero("even", &alg, Bidegree::new(2, 0));
        assert!(d.square_is_zero().is_err());
    }

    #[test]
    fn leibniz_extension_on_products() {
        // delta(th_e th_f) = delta(th_e) th_f - th_e delta(th_f)
        let alg = sl2_ghosts();
        let d = sl2_ce_delta(&alg);
        let e = Element::gen_named(&alg, "th_e").unwrap();
        let f = Element::gen_named(&alg, "th_f").unwrap();
        let prod = e.mul(&f).unwrap();
        let lhs = d.apply(&prod).unwrap();
        let rhs = d
            .apply(&e)
            .unwrap()
            .mul(&f)
            .unwrap()
            .sub(&e.mul(&d.apply(&f).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_map_identity_and_zero() {
        let alg = sl2_ghosts();
        let id = GradedMap::identity(&alg);
        let e = Element::gen_named(&alg, "th_e").unwrap();
        let f = Element::gen_named(&alg, "th_f").unwrap();
        let x = e.mul(&f).unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);

        // generator -> 0 kills every monomial containing it
        let mut z = GradedMap::identity(&alg);
        z.set(alg.by_name("th_e").unwrap(), Element::zero(&alg));
        assert!(z.apply(&x).unwrap().is_zero());
    }

    #[test]
    fn random_leibniz_identities_for_anticommuting_pairs() {
        // empirical check that generator-level identities propagate to
        // random products
        let alg = sl2_ghosts();
        let d = sl2_ce_delta(&alg);
        let z = Derivation::zero("z", &alg, Bidegree::new(0, -1));
        assert!(d.anticommutes_with(&z).unwrap());
        let mut rng = crate::rng::Rng::new(3);
        let ids: Vec<_> = alg.gen_ids().collect();
        for _ in 0..30 {
            let mut fs = Vec::new();
            for _ in 0..(1 + rng.below(3)) {
                fs.push((*rng.pick(&ids), 1));
            }
            let x = Element::from_factors(&alg, &fs, Scalar::one()).unwrap();
            let dd = d.apply(&d.apply(&x).unwrap()).unwrap();
            assert!(dd.is_zero());
        }
    }
}
