//! Noncommutative dg-algebras of differential operators quantizing the
//! level Poisson brackets, with rewriting to normal order.
//!
//! The quantized level algebra has one hatted generator per classical
//! generator, in the same canonical order. The commutation relations are
//! `x^ y^ - (-1)^{|x||y|} y^ x^ = hbar * hat({x, y}_n)`; normal order is
//! the canonical order (ghost block, commutative block, momentum block,
//! antighost block), so reducing a word repeatedly either removes an
//! inversion at fixed `hbar`-degree or replaces two noncommuting letters
//! by a correction with strictly fewer operator letters, which terminates.
//! Setting `hbar = 0` and stripping hats is an algebra map onto the
//! classical level; the normalized commutator descends to the Poisson
//! bracket (the correspondence principle, asserted in the suites against
//! an independently coded relation table).
//!
//! The quantized differential is stored as the explicit generator table
//! obtained by hatting the classical one; the graded-commutator definition
//! is kept as a cross-check oracle through a faithful representation by
//! differential operators on the ghost-coordinate polynomial module.

mod triple;

pub use triple::{
    build_pointing, endo_complex_point, endo_homology_point, enumerate_words, hom_complex_point,
    hom_homology_point,
    point_weight_triple, sort_word_pub, validate_morphism, validate_triple, validate_triple_timed, velem_basis,
    velem_zero, word_atoms, Atom, Basis, BasisKey, Morphism, MorphismReport, PerTriple,
    TripleCheck, TripleReport, VElem,
};

use crate::algebra::{merge_term, Algebra, Element, Monomial, QRelations};
use crate::ce::Level;
use crate::derivation::{Derivation, GradedMap};
use crate::error::{CdgaError, Result};
use crate::grading::Bidegree;
use crate::poisson::PoissonBracket;
use crate::scalar::Scalar;
use crate::symbol::{Block, GenId, GenInfo};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Rewrite strategy; both must produce identical normal forms (confluence
/// is exercised in the suites on random words).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    LeftmostInnermost,
    RightmostOutermost,
}

pub struct QuantizedLevel {
    pub level: Arc<Level>,
    pub bracket: Arc<PoissonBracket>,
    pub alg: Arc<Algebra>,
    /// `dhbar` generator table (values in the quantized algebra).
    dhbar: HashMap<GenId, Element>,
    /// Hatted copies of the commutative-block pair rewrites (the SL2
    /// determinant relation per tagged copy); generator ids agree with the
    /// classical level.
    rewrites: Vec<crate::algebra::PairRewrite>,
}

impl QuantizedLevel {
    pub fn build(level: &Arc<Level>, bracket: &Arc<PoissonBracket>) -> Result<QuantizedLevel> {
        let src = level.alg();
        let gens: Vec<GenInfo> = src
            .gens()
            .iter()
            .map(|g| {
                let mut info = GenInfo::new(format!("{}^", g.name), g.key.clone(), g.bidegree);
                if g.invertible {
                    info = info.invertible();
                }
                info
            })
            .collect();

        let src2 = src.clone();
        let bracket2 = bracket.clone();
        let alg = Algebra::quantized(format!("Q{}", src.name), gens, move |alg| {
            // corrections: for every out-of-order pair (x, y) with a
            // nonzero classical bracket, hbar * hat({x, y})
            let mut rels = QRelations::default();
            for x in src2.gen_ids() {
                for y in src2.gen_ids() {
                    if src2.info(x).key <= src2.info(y).key {
                        continue;
                    }
                    let b = bracket2.on_gens(x, y);
                    if b.is_zero() {
                        continue;
                    }
                    let corr: Vec<(Monomial, Scalar)> = b
                        .terms()
                        .map(|(m, c)| (m.clone(), c.mul(&Scalar::hbar())))
                        .collect();
                    // generator ids agree between the two algebras because
                    // both sort the same keys
                    rels.corrections.insert((x, y), corr);
                }
            }
            let _ = alg;
            rels
        });
        assert_eq!(alg.num_gens(), src.num_gens());

        let rewrites = match &level.alg().mode {
            crate::algebra::Mode::Commutative { rewrites } => rewrites.clone(),
            crate::algebra::Mode::Quantized(_) => Vec::new(),
        };
        let mut q = QuantizedLevel {
            level: level.clone(),
            bracket: bracket.clone(),
            alg,
            dhbar: HashMap::new(),
            rewrites,
        };
        let mut dhbar = HashMap::new();
        for g in src.gen_ids() {
            let classical = level.stacky.del.on_gen(g).add(&level.stacky.delta.on_gen(g))?;
            if !classical.is_zero() {
                dhbar.insert(g, q.hat(&classical)?);
            }
        }
        q.dhbar = dhbar;
        Ok(q)
    }

    /// The hat map: classical elements to normal-ordered quantized
    /// elements (monomial-for-monomial; the canonical commutative order is
    /// the normal order).
    pub fn hat(&self, x: &Element) -> Result<Element> {
        if x.alg().id != self.level.alg().id {
            return Err(CdgaError::AmbientMismatch {
                expected: self.level.alg().name.clone(),
                found: x.alg().name.clone(),
            });
        }
        Ok(Element::from_terms(
            &self.alg,
            x.terms().map(|(m, c)| (m.clone(), c.clone())),
        ))
    }

    /// Classical limit: drop `hbar`-positive terms and strip hats; an
    /// algebra map intertwining the differentials.
    pub fn classical_limit(&self, x: &Element) -> Result<Element> {
        if x.alg().id != self.alg.id {
            return Err(CdgaError::AmbientMismatch {
                expected: self.alg.name.clone(),
                found: x.alg().name.clone(),
            });
        }
        Ok(Element::from_terms(
            self.level.alg(),
            x.terms()
                .map(|(m, c)| (m.clone(), c.classical_part()))
                .filter(|(_, c)| !c.is_zero()),
        ))
    }

    /// Exact division of all coefficients by `hbar`; errors when some term
    /// has a nonzero constant part.
    pub fn div_hbar(&self, x: &Element) -> Result<Element> {
        let mut terms = Vec::new();
        for (m, c) in x.terms() {
            let d = c
                .div_hbar()
                .ok_or_else(|| CdgaError::Shape(format!("{} is not divisible by hbar", x)))?;
            terms.push((m.clone(), d));
        }
        Ok(Element::from_terms(&self.alg, terms))
    }

    /// Expands a normal monomial into rewrite letters: momentum and odd
    /// generators become unit letters; commutative-block generators keep
    /// their (possibly negative) exponents as a single letter.
    fn letters(&self, m: &Monomial) -> Vec<(GenId, i32)> {
        let mut out = Vec::new();
        for &(g, k) in &m.0 {
            match self.alg.info(g).key.block {
                Block::Coord | Block::HopfSlot => out.push((g, k)),
                _ => {
                    assert!(k >= 0, "operator letters cannot carry negative exponents");
                    for _ in 0..k {
                        out.push((g, 1));
                    }
                }
            }
        }
        out
    }

    fn find_inversion(&self, letters: &[(GenId, i32)], strategy: Strategy) -> Option<usize> {
        let bad = |i: usize| {
            let (x, _) = letters[i];
            let (y, _) = letters[i + 1];
            self.alg.info(x).key > self.alg.info(y).key
        };
        match strategy {
            Strategy::LeftmostInnermost => (0..letters.len().saturating_sub(1)).find(|&i| bad(i)),
            Strategy::RightmostOutermost => {
                (0..letters.len().saturating_sub(1)).rev().find(|&i| bad(i))
            }
        }
    }

    /// Collapses a letter word with no inversions into a normal monomial;
    /// `None` when an odd square annihilates the term.
    fn collapse(&self, letters: &[(GenId, i32)]) -> Option<Monomial> {
        let mut fs: Vec<(GenId, i32)> = Vec::with_capacity(letters.len());
        for &(g, k) in letters {
            if k == 0 {
                continue;
            }
            match fs.last_mut() {
                Some((g0, k0)) if *g0 == g => {
                    if self.alg.info(g).bidegree.is_odd() {
                        return None;
                    }
                    *k0 += k;
                    if *k0 == 0 {
                        fs.pop();
                    }
                }
                _ => fs.push((g, k)),
            }
        }
        Some(Monomial(fs))
    }

    /// Applies the commutative-block pair rewrites (all generators even
    /// and central within their block, so re-sorting is sign-free) to a
    /// normal-ordered monomial.
    fn coord_rewrites(&self, m: Monomial) -> Vec<(Monomial, Scalar)> {
        let mut done = Vec::new();
        let mut work = vec![(m, Scalar::one())];
        while let Some((m, c)) = work.pop() {
            let hit = self
                .rewrites
                .iter()
                .find(|r| m.exponent(r.a) >= 1 && m.exponent(r.b) >= 1);
            match hit {
                None => done.push((m, c)),
                Some(r) => {
                    let mut fs: Vec<(GenId, i32)> = m
                        .0
                        .iter()
                        .map(|&(g, k)| {
                            if g == r.a || g == r.b {
                                (g, k - 1)
                            } else {
                                (g, k)
                            }
                        })
                        .filter(|&(_, k)| k != 0)
                        .collect();
                    fs.sort_by_key(|&(g, _)| g);
                    for (rm, rc) in &r.replacement {
                        let mut fs2 = fs.clone();
                        for &(g, k) in &rm.0 {
                            match fs2.iter_mut().find(|(g2, _)| *g2 == g) {
                                Some((_, k2)) => *k2 += k,
                                None => fs2.push((g, k)),
                            }
                        }
                        fs2.retain(|&(_, k)| k != 0);
                        fs2.sort_by_key(|&(g, _)| g);
                        work.push((Monomial(fs2), c.mul(rc)));
                    }
                }
            }
        }
        done
    }

    /// Correction term for swapping the adjacent out-of-order letters
    /// `x^p y^q`: `hbar * hat({x^p, y^q}_n)`. Exact as an operator identity
    /// for every out-of-order pair in the block order (the momentum letter
    /// of such a pair always has exponent 1).
    fn swap_correction(&self, x: (GenId, i32), y: (GenId, i32)) -> Result<Element> {
        let classical = self.level.alg();
        let xe = Element::from_factors(classical, &[x], Scalar::one())?;
        let ye = Element::from_factors(classical, &[y], Scalar::one())?;
        let b = self.bracket.bracket(&xe, &ye)?;
        if b.is_zero() {
            return Ok(Element::zero(&self.alg));
        }
        Ok(self.hat(&b)?.scale(&Scalar::hbar()))
    }

    fn reduce_word(
        &self,
        letters: Vec<(GenId, i32)>,
        coeff: Scalar,
        strategy: Strategy,
        out: &mut BTreeMap<Monomial, Scalar>,
    ) -> Result<()> {
        let mut work = vec![(letters, coeff)];
        while let Some((ls, c)) = work.pop() {
            if c.is_zero() {
                continue;
            }
            match self.find_inversion(&ls, strategy) {
                None => {
                    if let Some(m) = self.collapse(&ls) {
                        for (m2, c2) in self.coord_rewrites(m) {
                            merge_term(out, m2, c.mul(&c2));
                        }
                    }
                }
                Some(i) => {
                    let (x, y) = (ls[i], ls[i + 1]);
                    let dx = self.alg.info(x.0).bidegree.scaled(x.1);
                    let dy = self.alg.info(y.0).bidegree.scaled(y.1);
                    let sign = crate::grading::koszul_sign(dx, dy);
                    let mut swapped = ls.clone();
                    swapped.swap(i, i + 1);
                    work.push((swapped, c.mul(&Scalar::from_int(sign as i64))));
                    let corr = self.swap_correction(x, y)?;
                    for (m, cc) in corr.terms() {
                        let mut spliced = ls[..i].to_vec();
                        spliced.extend(self.letters(m));
                        spliced.extend_from_slice(&ls[i + 2..]);
                        work.push((spliced, c.mul(cc)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Normal form of a word of hatted generators.
    pub fn word_normal_form(&self, word: &[GenId], strategy: Strategy) -> Result<Element> {
        let letters: Vec<(GenId, i32)> = word.iter().map(|&g| (g, 1)).collect();
        let mut out = BTreeMap::new();
        self.reduce_word(letters, Scalar::one(), strategy, &mut out)?;
        Ok(Element::from_terms(&self.alg, out))
    }

    /// Normal form of an element whose monomials may be in arbitrary
    /// letter order (idempotent on already-normal input).
    pub fn nc_normal_form(&self, x: &Element) -> Result<Element> {
        self.nc_normal_form_with(x, Strategy::LeftmostInnermost)
    }

    pub fn nc_normal_form_with(&self, x: &Element, strategy: Strategy) -> Result<Element> {
        if x.alg().id != self.alg.id {
            return Err(CdgaError::AmbientMismatch {
                expected: self.alg.name.clone(),
                found: x.alg().name.clone(),
            });
        }
        let mut out = BTreeMap::new();
        for (m, c) in x.terms() {
            self.reduce_word(self.letters(m), c.clone(), strategy, &mut out)?;
        }
        Ok(Element::from_terms(&self.alg, out))
    }

    /// Noncommutative product (normal-ordered).
    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.mul_with(x, y, Strategy::LeftmostInnermost)
    }

    pub fn mul_with(&self, x: &Element, y: &Element, strategy: Strategy) -> Result<Element> {
        let mut out = BTreeMap::new();
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                let mut letters = self.letters(mx);
                letters.extend(self.letters(my));
                self.reduce_word(letters, cx.mul(cy), strategy, &mut out)?;
            }
        }
        Ok(Element::from_terms(&self.alg, out))
    }

    /// Graded commutator `[x, y] = x y - (-1)^{|x||y|} y x` of homogeneous
    /// elements.
    pub fn commutator(&self, x: &Element, y: &Element) -> Result<Element> {
        let dx = x.total_degree().ok_or_else(|| {
            CdgaError::Shape("commutator of inhomogeneous element".into())
        })?;
        let dy = y.total_degree().ok_or_else(|| {
            CdgaError::Shape("commutator of inhomogeneous element".into())
        })?;
        let sign = if dx.rem_euclid(2) == 1 && dy.rem_euclid(2) == 1 {
            -1i64
        } else {
            1
        };
        let xy = self.mul(x, y)?;
        let yx = self.mul(y, x)?;
        xy.sub(&yx.scale(&Scalar::from_int(sign)))
    }

    pub fn dhbar_on_gen(&self, g: GenId) -> Element {
        self.dhbar
            .get(&g)
            .cloned()
            .unwrap_or_else(|| Element::zero(&self.alg))
    }

    /// The quantized differential, extended over normal words by the
    /// graded Leibniz rule with renormalization of every term. Letters of
    /// the commutative block use the Laurent power rule
    /// `d(g^k) = k g^{k-1} d(g)` (their differentials commute with them);
    /// operator letters are expanded positionally.
    pub fn apply_dhbar(&self, x: &Element) -> Result<Element> {
        let mut acc = Element::zero(&self.alg);
        for (m, c) in x.terms() {
            let letters = self.letters(m);
            for i in 0..letters.len() {
                let (g, k) = letters[i];
                let dg = self.dhbar_on_gen(g);
                if dg.is_zero() {
                    continue;
                }
                let mut sign = 1i64;
                for &(g2, k2) in &letters[..i] {
                    if self.alg.info(g2).bidegree.is_odd() && k2 % 2 != 0 {
                        sign = -sign;
                    }
                }
                // d(g^k) for the letter: power rule for commutative-block
                // letters (k may be negative on invertibles), plain d(g)
                // for unit operator letters
                let d_letter = if k == 1 {
                    dg
                } else {
                    let gk1 = Element::from_monomial(
                        &self.alg,
                        Monomial(vec![(g, k - 1)]),
                        Scalar::from_int(k as i64),
                    );
                    self.mul(&gk1, &dg)?
                };
                let prefix = Element::from_terms(
                    &self.alg,
                    [(
                        self.collapse(&letters[..i]).unwrap(),
                        Scalar::from_int(sign),
                    )],
                );
                let suffix = Element::from_terms(
                    &self.alg,
                    [(self.collapse(&letters[i + 1..]).unwrap(), Scalar::one())],
                );
                let term = self.mul(&self.mul(&prefix, &d_letter)?, &suffix)?;
                acc = acc.add(&term.scale(c))?;
            }
        }
        Ok(acc)
    }

    /// `dhbar^2 = 0` checked on all generators.
    pub fn dhbar_square_witness(&self) -> Result<Option<String>> {
        for g in self.alg.gen_ids() {
            let d2 = self.apply_dhbar(&self.dhbar_on_gen(g))?;
            if !d2.is_zero() {
                return Ok(Some(self.alg.info(g).name.clone()));
            }
        }
        Ok(None)
    }

    /// Quantized coface map: the classical generator table with hats.
    pub fn coface(&self, i: usize, target: &QuantizedLevel) -> Result<QuantizedMap> {
        let classical = crate::ce::coface(i, &self.level, &target.level)?;
        self.lift_map(classical, target)
    }

    /// Quantized codegeneracy map.
    pub fn codegeneracy(&self, i: usize, target: &QuantizedLevel) -> Result<QuantizedMap> {
        let classical = crate::ce::codegeneracy(i, &self.level, &target.level)?;
        self.lift_map(classical, target)
    }

    fn lift_map(&self, classical: GradedMap, target: &QuantizedLevel) -> Result<QuantizedMap> {
        let mut table = HashMap::new();
        for g in self.alg.gen_ids() {
            table.insert(g, target.hat(&classical.on_gen(g)?)?);
        }
        Ok(QuantizedMap {
            name: classical.name.clone(),
            classical,
            table,
        })
    }

    /// The faithful operator model: hatted generators act on the
    /// commutative polynomial module spanned by ghosts, coordinates, and
    /// Hopf slots inside the classical level algebra. Multiplication
    /// operators for even/odd polynomial generators; `hbar *` (extension
    /// of the frame action) for momenta; `hbar *` (odd derivation with
    /// values the classical antighost-ghost brackets) for antighosts.
    pub fn operator_apply(&self, ghat: GenId, elem: &Element) -> Result<Element> {
        let classical_alg = self.level.alg();
        let info = self.alg.info(ghat);
        match info.key.block {
            Block::Ghost | Block::Coord | Block::HopfSlot => {
                let g_classical = classical_alg.by_name(info.name.trim_end_matches('^')).unwrap();
                Element::gen(classical_alg, g_classical).mul(elem)
            }
            Block::Momentum | Block::Antighost => {
                let g_classical = classical_alg.by_name(info.name.trim_end_matches('^')).unwrap();
                let mut table = HashMap::new();
                for target in classical_alg.gen_ids() {
                    match classical_alg.info(target).key.block {
                        Block::Ghost | Block::Coord | Block::HopfSlot => {
                            let b = self.bracket.on_gens(g_classical, target);
                            if !b.is_zero() {
                                table.insert(target, b);
                            }
                        }
                        _ => {}
                    }
                }
                let bidegree = if info.key.block == Block::Momentum {
                    Bidegree::ZERO
                } else {
                    Bidegree::new(0, 1)
                };
                let d = Derivation::new("op", classical_alg, bidegree, table);
                Ok(d.apply(elem)?.scale(&Scalar::hbar()))
            }
        }
    }

    /// Applies a normal word as an operator (rightmost letter first);
    /// commutative-block letters act by (possibly Laurent) multiplication.
    pub fn word_operator_apply(&self, m: &Monomial, elem: &Element) -> Result<Element> {
        let mut acc = elem.clone();
        for &(g, k) in m.0.iter().rev() {
            match self.alg.info(g).key.block {
                Block::Ghost | Block::Coord | Block::HopfSlot => {
                    let classical_alg = self.level.alg();
                    let name = self.alg.info(g).name.clone();
                    let gc = classical_alg.by_name(name.trim_end_matches('^')).unwrap();
                    let pow = Element::from_factors(classical_alg, &[(gc, k)], Scalar::one())?;
                    acc = pow.mul(&acc)?;
                }
                _ => {
                    for _ in 0..k {
                        acc = self.operator_apply(g, &acc)?;
                    }
                }
            }
        }
        Ok(acc)
    }

    pub fn element_operator_apply(&self, x: &Element, elem: &Element) -> Result<Element> {
        let classical_alg = self.level.alg();
        let mut acc = Element::zero(classical_alg);
        for (m, c) in x.terms() {
            acc = acc.add(&self.word_operator_apply(m, elem)?.scale(c))?;
        }
        Ok(acc)
    }

    /// The classical total differential restricted to the polynomial
    /// module (it closes on it).
    pub fn module_differential(&self, elem: &Element) -> Result<Element> {
        self.level.stacky.total_apply(elem)
    }

    /// Cross-check of the quantized differential against the graded
    /// commutator definition `[d, -]`, evaluated as operators on a sample
    /// element: `op(dhbar(w)) ?= d . op(w) - (-1)^{|w|} op(w) . d`.
    pub fn commutator_oracle(&self, m: &Monomial, sample: &Element) -> Result<bool> {
        let dh = self.apply_dhbar(&Element::from_monomial(&self.alg, m.clone(), Scalar::one()))?;
        let lhs = self.element_operator_apply(&dh, sample)?;
        let parity = self.alg.monomial_bidegree(m).total().rem_euclid(2);
        let sign = if parity == 1 { -1i64 } else { 1 };
        let rhs = self
            .module_differential(&self.word_operator_apply(m, sample)?)?
            .sub(
                &self
                    .word_operator_apply(m, &self.module_differential(sample)?)?
                    .scale(&Scalar::from_int(sign)),
            )?;
        Ok(lhs == rhs)
    }
}

/// A quantized cosimplicial map: hatted generator table applied by
/// noncommutative multiplication of images in word order.
pub struct QuantizedMap {
    pub name: String,
    pub classical: GradedMap,
    table: HashMap<GenId, Element>,
}

impl QuantizedMap {
    pub fn on_gen(&self, g: GenId) -> Element {
        self.table[&g].clone()
    }

    pub fn apply(&self, q: &QuantizedLevel, target: &QuantizedLevel, x: &Element) -> Result<Element> {
        let _ = q;
        let mut acc = Element::zero(&target.alg);
        for (m, c) in x.terms() {
            let mut prod = Element::one(&target.alg);
            for &(g, k) in &m.0 {
                let img = &self.table[&g];
                let p = if k >= 0 {
                    let mut p = Element::one(&target.alg);
                    for _ in 0..k {
                        p = target.mul(&p, img)?;
                    }
                    p
                } else {
                    // inverse images only arise for unit monomials
                    let inv = img.invert()?;
                    let mut p = Element::one(&target.alg);
                    for _ in 0..(-k) {
                        p = target.mul(&p, &inv)?;
                    }
                    p
                };
                prod = target.mul(&prod, &p)?;
            }
            acc = acc.add(&prod.scale(c))?;
        }
        Ok(acc)
    }

    /// Compatibility with the commutation relations: for every generator
    /// pair, mapping the normal form of `x y` equals the product of the
    /// images.
    pub fn respects_relations(
        &self,
        q: &QuantizedLevel,
        target: &QuantizedLevel,
    ) -> Result<Option<String>> {
        for x in q.alg.gen_ids() {
            for y in q.alg.gen_ids() {
                let xy = q.mul(&Element::gen(&q.alg, x), &Element::gen(&q.alg, y))?;
                let lhs = self.apply(q, target, &xy)?;
                let rhs = target.mul(&self.on_gen(x), &self.on_gen(y))?;
                if lhs != rhs {
                    return Ok(Some(format!(
                        "{} * {}",
                        q.alg.info(x).name,
                        q.alg.info(y).name
                    )));
                }
            }
        }
        Ok(None)
    }

    /// Compatibility with the quantized differentials on generators.
    pub fn respects_dhbar(
        &self,
        q: &QuantizedLevel,
        target: &QuantizedLevel,
    ) -> Result<Option<String>> {
        for g in q.alg.gen_ids() {
            let lhs = self.apply(q, target, &q.dhbar_on_gen(g))?;
            let rhs = target.apply_dhbar(&self.on_gen(g))?;
            if lhs != rhs {
                return Ok(Some(q.alg.info(g).name.clone()));
            }
        }
        Ok(None)
    }
}
