//! Commutative Hopf algebras with exact normal forms, Sweedler calculus,
//! and the Lie-theoretic data derived from them.
//!
//! Two families of factors are supported: Laurent tori `G_m^k` and SL(2),
//! whose single determinant relation `ad - bc = 1` is implemented by the
//! terminating, confluent rewrite `a d -> 1 + b c`. A [`Hopf`] is a tensor
//! product of tagged factor copies; the function Hopf algebra of a gauge
//! group is one of these with a factor per vertex.
//!
//! The Lie algebra is realized as counit-derivations `t : H -> K` with
//! `t(h h') = t(h) eps(h') + eps(h) t(h')`; its dual is `H^+ / H^{+2}`,
//! represented by chosen monomial lifts. Brackets are computed by the
//! convolution commutator and cached as structure constants. The adjoint
//! coaction matrix is obtained from the conjugation coaction
//! `h -> h_(2) x S(h_(1)) h_(3)` on the lifts, then entrywise antipode
//! (the inverse matrix of a matrix corepresentation).

use crate::algebra::{Algebra, Element, Monomial, PairRewrite};
use crate::derivation::Derivation;
use crate::error::{CdgaError, Result};
use crate::grading::Bidegree;
use crate::scalar::{Rat, Scalar};
use crate::symbol::{Block, GenId, GenInfo, GenKey, Tag};
use crate::tensor::Tensor;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Arc;

/// Choice of structure group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupKind {
    Torus { rank: usize },
    Sl2,
}

impl GroupKind {
    pub fn dim(&self) -> usize {
        match self {
            GroupKind::Torus { rank } => *rank,
            GroupKind::Sl2 => 3,
        }
    }

    pub fn num_gens(&self) -> usize {
        match self {
            GroupKind::Torus { rank } => *rank,
            GroupKind::Sl2 => 4,
        }
    }

    fn gen_names(&self) -> Vec<String> {
        match self {
            GroupKind::Torus { rank } => {
                if *rank == 1 {
                    vec!["x".into()]
                } else {
                    (1..=*rank).map(|i| format!("x{}", i)).collect()
                }
            }
            GroupKind::Sl2 => vec!["a".into(), "b".into(), "c".into(), "d".into()],
        }
    }

    pub fn basis_names(&self) -> Vec<String> {
        match self {
            GroupKind::Torus { rank } => {
                if *rank == 1 {
                    vec!["t".into()]
                } else {
                    (1..=*rank).map(|i| format!("t{}", i)).collect()
                }
            }
            GroupKind::Sl2 => vec!["e".into(), "h".into(), "f".into()],
        }
    }
}

/// One tagged tensor factor of a Hopf algebra.
#[derive(Clone)]
pub struct HopfFactor {
    pub kind: GroupKind,
    pub tag: Tag,
    /// Generator ids of this factor, in the kind's canonical order.
    pub gens: Vec<GenId>,
}

pub struct Hopf {
    pub alg: Arc<Algebra>,
    pub factors: Vec<HopfFactor>,
    comul: HashMap<GenId, Tensor>,
    counit: HashMap<GenId, Rat>,
    antipode: HashMap<GenId, Element>,
}

impl Hopf {
    /// A single factor with no tag.
    pub fn new(kind: GroupKind) -> Arc<Hopf> {
        Hopf::tensor("H", vec![(kind, Tag::None)], Block::Coord)
    }

    /// Tensor product of tagged factor copies. `block` selects where the
    /// generators sort in the global canonical order: `Coord` for
    /// standalone Hopf algebras and edge copies inside a phase-space
    /// algebra.
    pub fn tensor(name: &str, kinds: Vec<(GroupKind, Tag)>, block: Block) -> Arc<Hopf> {
        let mut gens = Vec::new();
        for (kind, tag) in &kinds {
            for (i, gname) in kind.gen_names().iter().enumerate() {
                let mut info = GenInfo::new(
                    format!("{}{}", gname, tag.suffix()),
                    GenKey::new(block, 0, tag.clone(), i as u32),
                    Bidegree::ZERO,
                );
                if matches!(kind, GroupKind::Torus { .. }) {
                    info = info.invertible();
                }
                gens.push(info);
            }
        }
        let kinds2 = kinds.clone();
        let alg = Algebra::commutative_with_rewrites(name, gens, move |alg| {
            let mut rewrites = Vec::new();
            for (kind, tag) in &kinds2 {
                if matches!(kind, GroupKind::Sl2) {
                    let g = |n: &str| alg.by_name(&format!("{}{}", n, tag.suffix())).unwrap();
                    let (a, b, c, d) = (g("a"), g("b"), g("c"), g("d"));
                    // a d -> 1 + b c
                    rewrites.push(PairRewrite {
                        a,
                        b: d,
                        replacement: vec![
                            (Monomial::unit(), Scalar::one()),
                            (Monomial(vec![(b.min(c), 1), (b.max(c), 1)]), Scalar::one()),
                        ],
                    });
                }
            }
            rewrites
        });

        let mut factors = Vec::new();
        let mut comul = HashMap::new();
        let mut counit = HashMap::new();
        let mut antipode = HashMap::new();
        for (kind, tag) in kinds {
            let ids: Vec<GenId> = kind
                .gen_names()
                .iter()
                .map(|n| alg.by_name(&format!("{}{}", n, tag.suffix())).unwrap())
                .collect();
            match kind {
                GroupKind::Torus { .. } => {
                    for &x in &ids {
                        let xe = Element::gen(&alg, x);
                        comul.insert(x, Tensor::pure(&[xe.clone(), xe.clone()]));
                        counit.insert(x, Rat::one());
                        antipode.insert(x, xe.invert().unwrap());
                    }
                }
                GroupKind::Sl2 => {
                    let (a, b, c, d) = (ids[0], ids[1], ids[2], ids[3]);
                    let e = |g: GenId| Element::gen(&alg, g);
                    // matrix comultiplication Delta(u_ij) = sum_k u_ik x u_kj
                    let pairs = [
                        (a, [(a, a), (b, c)]),
                        (b, [(a, b), (b, d)]),
                        (c, [(c, a), (d, c)]),
                        (d, [(c, b), (d, d)]),
                    ];
                    for (g, terms) in pairs {
                        let mut t = Tensor::zero(vec![alg.clone(), alg.clone()]);
                        for (l, r) in terms {
                            t = t.add(&Tensor::pure(&[e(l), e(r)])).unwrap();
                        }
                        comul.insert(g, t);
                    }
                    counit.insert(a, Rat::one());
                    counit.insert(b, Rat::zero());
                    counit.insert(c, Rat::zero());
                    counit.insert(d, Rat::one());
                    antipode.insert(a, e(d));
                    antipode.insert(b, e(b).neg());
                    antipode.insert(c, e(c).neg());
                    antipode.insert(d, e(a));
                }
            }
            factors.push(HopfFactor { kind, tag, gens: ids });
        }
        Arc::new(Hopf {
            alg,
            factors,
            comul,
            counit,
            antipode,
        })
    }

    pub fn counit_gen(&self, g: GenId) -> Rat {
        self.counit[&g].clone()
    }

    pub fn comul_gen(&self, g: GenId) -> &Tensor {
        &self.comul[&g]
    }

    /// Counit on a monomial (multiplicative).
    pub fn counit_monomial(&self, m: &Monomial) -> Scalar {
        let mut acc = Rat::one();
        for &(g, k) in &m.0 {
            let e = self.counit_gen(g);
            acc = acc * rat_pow(&e, k);
        }
        Scalar::from_rat(acc)
    }

    pub fn counit(&self, x: &Element) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in x.terms() {
            acc += c.mul(&self.counit_monomial(m));
        }
        acc
    }

    /// Comultiplication of a monomial: product of generator
    /// comultiplications with matching exponents.
    pub fn comul_monomial(&self, m: &Monomial) -> Result<Tensor> {
        let mut acc = Tensor::unit(vec![self.alg.clone(), self.alg.clone()]);
        for &(g, k) in &m.0 {
            acc = acc.mul(&self.comul[&g].pow(k)?)?;
        }
        Ok(acc)
    }

    /// `Delta(x)` as a two-slot tensor.
    pub fn comultiply(&self, x: &Element) -> Result<Tensor> {
        let mut acc = Tensor::zero(vec![self.alg.clone(), self.alg.clone()]);
        for (m, c) in x.terms() {
            acc = acc.add(&self.comul_monomial(m)?.scale(c))?;
        }
        Ok(acc)
    }

    /// Iterated comultiplication `Delta^n(x)` in `H^{x(n+1)}`; by
    /// coassociativity the expansion slot does not matter (tested).
    pub fn comultiply_iterated(&self, x: &Element, n: usize) -> Result<Tensor> {
        let mut t = Tensor::from_element(x);
        for _ in 0..n {
            let last = t.num_slots() - 1;
            t = self.comultiply_slot(&t, last)?;
        }
        Ok(t)
    }

    /// Applies `Delta` to slot `i` of a tensor whose slot `i` is this Hopf
    /// algebra.
    pub fn comultiply_slot(&self, t: &Tensor, i: usize) -> Result<Tensor> {
        if t.slots[i].id != self.alg.id {
            return Err(CdgaError::Shape("comultiply_slot on foreign slot".into()));
        }
        t.expand_slot(i, vec![self.alg.clone(), self.alg.clone()], |m| {
            self.comul_monomial(m)
        })
    }

    /// Antipode, extended as an algebra map.
    pub fn antipode(&self, x: &Element) -> Result<Element> {
        let mut acc = Element::zero(&self.alg);
        for (m, c) in x.terms() {
            let mut prod = Element::one(&self.alg);
            for &(g, k) in &m.0 {
                prod = prod.mul(&self.antipode[&g].pow(k)?)?;
            }
            acc = acc.add(&prod.scale(c))?;
        }
        Ok(acc)
    }

    pub fn antipode_monomial(&self, m: &Monomial) -> Result<Element> {
        self.antipode(&Element::from_monomial(&self.alg, m.clone(), Scalar::one()))
    }

    /// The Lie algebra data of this Hopf algebra (one block per factor).
    pub fn lie_data(self: &Arc<Hopf>) -> Result<Arc<LieData>> {
        LieData::build(self)
    }
}

fn rat_pow(r: &Rat, k: i32) -> Rat {
    if k == 0 {
        return Rat::one();
    }
    if k < 0 {
        assert!(!r.is_zero(), "negative power of zero counit");
        return Rat::one() / rat_pow(r, -k);
    }
    let mut acc = Rat::one();
    for _ in 0..k {
        acc = acc * r;
    }
    acc
}

/// A basis element of the Lie algebra `Der_eps(H, K)`, given by its values
/// on the Hopf generators.
#[derive(Clone)]
pub struct LieBasisElement {
    pub name: String,
    pub tag: Tag,
    /// Index of the factor this element lives on, and within the factor.
    pub factor: usize,
    pub index: usize,
    pub values: HashMap<GenId, Rat>,
    /// A lift in `H^+` of the dual basis vector `theta`.
    pub lift: Element,
}

impl LieBasisElement {
    pub fn value_on_gen(&self, g: GenId) -> Rat {
        self.values.get(&g).cloned().unwrap_or_else(Rat::zero)
    }
}

/// Evaluates a counit-derivation with the given generator values on a
/// monomial: `t(prod g^k) = sum_i k_i eps(g_i)^{k_i-1} t(g_i) prod_{j!=i}
/// eps(g_j)^{k_j}`.
pub fn lie_eval_monomial(hopf: &Hopf, values: &HashMap<GenId, Rat>, m: &Monomial) -> Rat {
    let mut acc = Rat::zero();
    for (i, &(g, k)) in m.0.iter().enumerate() {
        let tg = match values.get(&g) {
            Some(v) if !v.is_zero() => v.clone(),
            _ => continue,
        };
        let eg = hopf.counit_gen(g);
        let mut term = Rat::from_integer(k.into()) * rat_pow(&eg, k - 1) * tg;
        if term.is_zero() {
            continue;
        }
        for (j, &(g2, k2)) in m.0.iter().enumerate() {
            if j == i {
                continue;
            }
            term = term * rat_pow(&hopf.counit_gen(g2), k2);
        }
        acc = acc + term;
    }
    acc
}

pub fn lie_eval_element(hopf: &Hopf, values: &HashMap<GenId, Rat>, x: &Element) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in x.terms() {
        acc += c.mul(&Scalar::from_rat(lie_eval_monomial(hopf, values, m)));
    }
    acc
}

/// Full Lie-theoretic data of a Hopf algebra: basis, structure constants,
/// dual lifts, and the (co)adjoint coaction matrices.
pub struct LieData {
    pub hopf: Arc<Hopf>,
    pub basis: Vec<LieBasisElement>,
    /// `[t_a, t_b] = sum_c structure[(a,b)][c] t_c` (sparse).
    structure: HashMap<(usize, usize), Vec<(usize, Rat)>>,
    /// Coadjoint matrix: `rho(theta^a) = sum_c theta^c x coadjoint[a][c]`.
    pub coadjoint: Vec<Vec<Element>>,
    /// Adjoint matrix: `rho(t_b) = sum_c t_c x adjoint[c][b]`; the
    /// entrywise antipode of the coadjoint matrix.
    pub adjoint: Vec<Vec<Element>>,
}

impl LieData {
    fn build(hopf: &Arc<Hopf>) -> Result<Arc<LieData>> {
        let alg = &hopf.alg;
        let mut basis = Vec::new();
        for (fi, factor) in hopf.factors.iter().enumerate() {
            let names = factor.kind.basis_names();
            match factor.kind {
                GroupKind::Torus { rank } => {
                    for i in 0..rank {
                        let x = factor.gens[i];
                        let mut values = HashMap::new();
                        values.insert(x, Rat::one());
                        let lift = Element::gen(alg, x).sub(&Element::one(alg))?;
                        basis.push(LieBasisElement {
                            name: format!("{}{}", names[i], factor.tag.suffix()),
                            tag: factor.tag.clone(),
                            factor: fi,
                            index: i,
                            values,
                            lift,
                        });
                    }
                }
                GroupKind::Sl2 => {
                    let (a, b, c, d) = (
                        factor.gens[0],
                        factor.gens[1],
                        factor.gens[2],
                        factor.gens[3],
                    );
                    // e(c) = 1 ; h(a) = -1, h(d) = 1 ; f(b) = 1
                    // dual lifts: theta^e = c, theta^h = d - 1, theta^f = b
                    let mk = |pairs: &[(GenId, i64)], lift: Element, idx: usize| LieBasisElement {
                        name: format!("{}{}", names[idx], factor.tag.suffix()),
                        tag: factor.tag.clone(),
                        factor: fi,
                        index: idx,
                        values: pairs
                            .iter()
                            .map(|&(g, v)| (g, Rat::from_integer(v.into())))
                            .collect(),
                        lift,
                    };
                    basis.push(mk(&[(c, 1)], Element::gen(alg, c), 0));
                    basis.push(mk(
                        &[(a, -1), (d, 1)],
                        Element::gen(alg, d).sub(&Element::one(alg))?,
                        1,
                    ));
                    basis.push(mk(&[(b, 1)], Element::gen(alg, b), 2));
                }
            }
        }

        let mut data = LieData {
            hopf: hopf.clone(),
            basis,
            structure: HashMap::new(),
            coadjoint: Vec::new(),
            adjoint: Vec::new(),
        };
        data.compute_structure()?;
        data.compute_adjoint()?;
        data.check_jacobi()?;
        Ok(Arc::new(data))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `<theta^a, t_b>` via evaluation of the derivation on the lift.
    pub fn pairing(&self, a: usize, b: usize) -> Rat {
        lie_eval_element(&self.hopf, &self.basis[b].values, &self.basis[a].lift).eval_zero()
    }

    /// Convolution commutator `[s,t](h) = s(h_(1)) t(h_(2)) - t(h_(1)) s(h_(2))`
    /// evaluated on a generator.
    fn convolution_bracket_on_gen(&self, a: usize, b: usize, g: GenId) -> Rat {
        let hopf = &self.hopf;
        let delta = &hopf.comul[&g];
        let mut acc = Rat::zero();
        for (ms, c) in &delta.terms {
            let s1 = lie_eval_monomial(hopf, &self.basis[a].values, &ms[0]);
            let t2 = lie_eval_monomial(hopf, &self.basis[b].values, &ms[1]);
            let t1 = lie_eval_monomial(hopf, &self.basis[b].values, &ms[0]);
            let s2 = lie_eval_monomial(hopf, &self.basis[a].values, &ms[1]);
            acc = acc + c.eval_zero() * (s1 * t2 - t1 * s2);
        }
        acc
    }

    fn compute_structure(&mut self) -> Result<()> {
        let n = self.basis.len();
        for a in 0..n {
            for b in 0..n {
                if self.basis[a].factor != self.basis[b].factor {
                    continue; // different factors commute
                }
                // the bracket is again a counit-derivation; expand it in
                // the basis by evaluating on the dual lifts
                let mut comps = Vec::new();
                for c in 0..n {
                    if self.basis[c].factor != self.basis[a].factor {
                        continue;
                    }
                    let mut coeff = Rat::zero();
                    for (m, s) in self.basis[c].lift.terms() {
                        coeff = coeff + s.eval_zero() * self.eval_bracket_on_monomial(a, b, m)?;
                    }
                    if !coeff.is_zero() {
                        comps.push((c, coeff));
                    }
                }
                if !comps.is_empty() {
                    self.structure.insert((a, b), comps);
                }
            }
        }
        Ok(())
    }

    fn eval_bracket_on_monomial(&self, a: usize, b: usize, m: &Monomial) -> Result<Rat> {
        // lifts are polynomials of degree <= 1 in the generators, so the
        // bracket only needs values on generators and the unit
        if m.is_unit() {
            return Ok(Rat::zero());
        }
        if m.0.len() == 1 && m.0[0].1 == 1 {
            return Ok(self.convolution_bracket_on_gen(a, b, m.0[0].0));
        }
        Err(CdgaError::Shape(format!("lift monomial {:?} is not linear", m)))
    }

    /// Structure constants: `[t_a, t_b] = sum f^c_{ab} t_c`.
    pub fn bracket(&self, a: usize, b: usize) -> Vec<(usize, Rat)> {
        self.structure.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn structure_constant(&self, c: usize, a: usize, b: usize) -> Rat {
        self.bracket(a, b)
            .into_iter()
            .find(|&(i, _)| i == c)
            .map(|(_, v)| v)
            .unwrap_or_else(Rat::zero)
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut acc = Rat::zero();
                        for e in 0..n {
                            acc = acc
                                + self.structure_constant(d, a, e)
                                    * self.structure_constant(e, b, c)
                                + self.structure_constant(d, b, e)
                                    * self.structure_constant(e, c, a)
                                + self.structure_constant(d, c, e)
                                    * self.structure_constant(e, a, b);
                        }
                        if !acc.is_zero() {
                            return Err(CdgaError::NotLieAction {
                                a: self.basis[a].name.clone(),
                                b: self.basis[b].name.clone(),
                                gen: self.basis[c].name.clone(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Coadjoint matrix from the conjugation coaction
    /// `rho(theta) = theta_(2) x S(theta_(1)) theta_(3)` on the lifts,
    /// projecting the first leg to the dual space via the
    /// counit-derivations.
    fn compute_adjoint(&mut self) -> Result<()> {
        let hopf = self.hopf.clone();
        let n = self.dim();
        let zero = Element::zero(&hopf.alg);
        let mut coad = vec![vec![zero.clone(); n]; n];
        for a in 0..n {
            let lift = self.basis[a].lift.clone();
            let sweedler = hopf.comultiply_iterated(&lift, 2)?;
            for (ms, coeff) in &sweedler.terms {
                // term m1 x m2 x m3 contributes t_c(m2) * S(m1) m3
                let s_m1 = hopf.antipode_monomial(&ms[0])?;
                let m3 = Element::from_monomial(&hopf.alg, ms[2].clone(), Scalar::one());
                let prod = s_m1.mul(&m3)?.scale(coeff);
                for c in 0..n {
                    if self.basis[c].factor != self.basis[a].factor {
                        continue;
                    }
                    let v = lie_eval_monomial(&hopf, &self.basis[c].values, &ms[1]);
                    if v.is_zero() {
                        continue;
                    }
                    coad[a][c] = coad[a][c].add(&prod.scale_rat(&v))?;
                }
            }
        }
        let mut adj = vec![vec![Element::zero(&hopf.alg); n]; n];
        for c in 0..n {
            for b in 0..n {
                adj[c][b] = hopf.antipode(&coad[c][b])?;
            }
        }
        self.coadjoint = coad;
        self.adjoint = adj;
        Ok(())
    }

    /// Adjoint coaction `rho_g(t_b) = sum_c t_c x C^c_b` as a list of
    /// `(basis index, H-element)` pairs.
    pub fn adjoint_coaction(&self, b: usize) -> Vec<(usize, Element)> {
        (0..self.dim())
            .filter(|&c| !self.adjoint[c][b].is_zero())
            .map(|c| (c, self.adjoint[c][b].clone()))
            .collect()
    }

    /// Coadjoint coaction `rho(theta^a) = sum_c theta^c x D^a_c`.
    pub fn coadjoint_coaction(&self, a: usize) -> Vec<(usize, Element)> {
        (0..self.dim())
            .filter(|&c| !self.coadjoint[a][c].is_zero())
            .map(|c| (c, self.coadjoint[a][c].clone()))
            .collect()
    }

    /// The induced Lie action on the Lie algebra itself:
    /// `(id x t_a)(rho_g(t_b))`, which equals the bracket `[t_a, t_b]`
    /// (verified in tests).
    pub fn adjoint_lie_action(&self, a: usize, b: usize) -> Vec<(usize, Rat)> {
        let mut out = Vec::new();
        for c in 0..self.dim() {
            let v = lie_eval_element(&self.hopf, &self.basis[a].values, &self.adjoint[c][b]);
            let v0 = v.eval_zero();
            if !v0.is_zero() {
                out.push((c, v0));
            }
        }
        out
    }

    /// Left-invariant derivation `rho^L(t)(h) = h_(1) t(h_(2))`.
    pub fn rho_l(&self, b: usize) -> Result<Derivation> {
        self.invariant_derivation(b, true)
    }

    /// Right-invariant action `rho^R(t)(h) = t(S(h_(1))) h_(2)`.
    pub fn rho_r(&self, b: usize) -> Result<Derivation> {
        self.invariant_derivation(b, false)
    }

    fn invariant_derivation(&self, b: usize, left: bool) -> Result<Derivation> {
        let hopf = &self.hopf;
        let mut table = HashMap::new();
        for g in hopf.alg.gen_ids() {
            let delta = &hopf.comul[&g];
            let mut acc = Element::zero(&hopf.alg);
            for (ms, c) in &delta.terms {
                if left {
                    let v = lie_eval_monomial(hopf, &self.basis[b].values, &ms[1]);
                    if !v.is_zero() {
                        acc = acc.add(
                            &Element::from_monomial(&hopf.alg, ms[0].clone(), c.clone())
                                .scale_rat(&v),
                        )?;
                    }
                } else {
                    let s1 = hopf.antipode_monomial(&ms[0])?;
                    let v = lie_eval_element(hopf, &self.basis[b].values, &s1).eval_zero();
                    if !v.is_zero() {
                        acc = acc.add(
                            &Element::from_monomial(&hopf.alg, ms[1].clone(), c.clone())
                                .scale_rat(&v),
                        )?;
                    }
                }
            }
            if !acc.is_zero() {
                table.insert(g, acc);
            }
        }
        Ok(Derivation::new(
            format!("rho_{}({})", if left { "L" } else { "R" }, self.basis[b].name),
            &hopf.alg,
            Bidegree::ZERO,
            table,
        ))
    }

    /// Expands a derivation of the Hopf algebra in the left-invariant
    /// frame: `D = sum_b c_b rho^L(t_b)` with `c_b = S(L_(1)) D(L_(2))`
    /// where `L` is the lift of `theta^b`. Verifies the expansion on all
    /// generators and errors when `D` is not in the frame span.
    pub fn expand_in_left_frame(&self, d: &Derivation) -> Result<Vec<(usize, Element)>> {
        let hopf = &self.hopf;
        let mut coeffs = Vec::new();
        for b in 0..self.dim() {
            let lift = &self.basis[b].lift;
            let delta = hopf.comultiply(lift)?;
            let mut c = Element::zero(&hopf.alg);
            for (ms, s) in &delta.terms {
                let s_m1 = hopf.antipode_monomial(&ms[0])?;
                let d_m2 =
                    d.apply(&Element::from_monomial(&hopf.alg, ms[1].clone(), Scalar::one()))?;
                c = c.add(&s_m1.mul(&d_m2)?.scale(s))?;
            }
            if !c.is_zero() {
                coeffs.push((b, c));
            }
        }
        // verify on generators
        for g in hopf.alg.gen_ids() {
            let mut acc = Element::zero(&hopf.alg);
            for (b, c) in &coeffs {
                let rl = self.rho_l(*b)?;
                acc = acc.add(&c.mul(&rl.on_gen(g))?)?;
            }
            if acc != d.on_gen(g) {
                return Err(CdgaError::FrameExpansion(hopf.alg.info(g).name.clone()));
            }
        }
        Ok(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn torus1() -> (Arc<Hopf>, Arc<LieData>) {
        let h = Hopf::new(GroupKind::Torus { rank: 1 });
        let lie = h.lie_data().unwrap();
        (h, lie)
    }

    fn sl2() -> (Arc<Hopf>, Arc<LieData>) {
        let h = Hopf::new(GroupKind::Sl2);
        let lie = h.lie_data().unwrap();
        (h, lie)
    }

    #[test]
    fn torus_grouplike_comultiplication() {
        let (h, _) = torus1();
        let x = Element::gen_named(&h.alg, "x").unwrap();
        let d2 = h.comultiply_iterated(&x, 2).unwrap();
        let expected = Tensor::pure(&[x.clone(), x.clone(), x.clone()]);
        assert_eq!(d2, expected);
        let one = Element::one(&h.alg);
        assert_eq!(
            h.comultiply(&one).unwrap(),
            Tensor::pure(&[one.clone(), one.clone()])
        );
    }

    #[test]
    fn torus_antipode_inverts_powers() {
        let (h, _) = torus1();
        let x = Element::gen_named(&h.alg, "x").unwrap();
        let x3 = x.pow(3).unwrap();
        assert_eq!(h.antipode(&x3).unwrap(), x.pow(-3).unwrap());
        assert_eq!(
            h.antipode(&Element::one(&h.alg)).unwrap(),
            Element::one(&h.alg)
        );
    }

    #[test]
    fn sl2_comultiplication_and_antipode() {
        let (h, _) = sl2();
        let a = Element::gen_named(&h.alg, "a").unwrap();
        let b = Element::gen_named(&h.alg, "b").unwrap();
        let c = Element::gen_named(&h.alg, "c").unwrap();
        let d = Element::gen_named(&h.alg, "d").unwrap();
        let da = h.comultiply(&a).unwrap();
        let expected = Tensor::pure(&[a.clone(), a.clone()])
            .add(&Tensor::pure(&[b.clone(), c.clone()]))
            .unwrap();
        assert_eq!(da, expected);
        // S(a d) = d a -> 1 + b c after the determinant rewrite
        let ad = a.mul(&d).unwrap();
        let s_ad = h.antipode(&ad).unwrap();
        let expected = Element::one(&h.alg).add(&b.mul(&c).unwrap()).unwrap();
        assert_eq!(s_ad, expected);
        // and a*d itself normalizes to 1 + b c
        assert_eq!(ad, expected);
    }

    #[test]
    fn sl2_normal_form_excludes_ad() {
        let (h, _) = sl2();
        let a = h.alg.by_name("a").unwrap();
        let d = h.alg.by_name("d").unwrap();
        let e = Element::from_factors(&h.alg, &[(a, 2), (d, 1)], Scalar::one()).unwrap();
        assert!(!e.is_zero());
        for (m, _) in e.terms() {
            assert!(!(m.contains(a) && m.contains(d)));
        }
    }

    #[test]
    fn hopf_axioms_on_generators_and_random_products() {
        for (h, _) in [torus1(), sl2()] {
            let mut rng = crate::rng::Rng::new(17);
            let ids: Vec<_> = h.alg.gen_ids().collect();
            let mut samples: Vec<Element> =
                ids.iter().map(|&g| Element::gen(&h.alg, g)).collect();
            for _ in 0..10 {
                let mut fs = Vec::new();
                for _ in 0..(1 + rng.below(3)) {
                    fs.push((*rng.pick(&ids), 1));
                }
                samples.push(Element::from_factors(&h.alg, &fs, Scalar::one()).unwrap());
            }
            for x in &samples {
                // coassociativity
                let d = h.comultiply(x).unwrap();
                let left = h.comultiply_slot(&d, 0).unwrap();
                let right = h.comultiply_slot(&d, 1).unwrap();
                assert_eq!(left, right, "coassociativity failed on {}", x);
                // counit laws
                let l = d
                    .contract_slot(0, |m| h.counit_monomial(m))
                    .into_element()
                    .unwrap();
                let r = d
                    .contract_slot(1, |m| h.counit_monomial(m))
                    .into_element()
                    .unwrap();
                assert_eq!(&l, x);
                assert_eq!(&r, x);
                // antipode law m(S x id)Delta = eta eps
                let s_first = d.map_slot(0, |e| h.antipode(e)).unwrap();
                let m1 = s_first.merge_slots(0).unwrap().into_element().unwrap();
                let expected = Element::scalar(&h.alg, h.counit(x));
                assert_eq!(m1, expected, "antipode law failed on {}", x);
            }
        }
    }

    #[test]
    fn convolution_brackets_reproduce_sl2() {
        let (_, lie) = sl2();
        // basis order: e, h, f
        let names: Vec<_> = lie.basis.iter().map(|b| b.name.clone()).collect();
        assert_eq!(names, vec!["e", "h", "f"]);
        // [h, e] = 2e
        assert_eq!(lie.bracket(1, 0), vec![(0, rat_int(2))]);
        // [h, f] = -2f
        assert_eq!(lie.bracket(1, 2), vec![(2, rat_int(-2))]);
        // [e, f] = h
        assert_eq!(lie.bracket(0, 2), vec![(1, rat_int(1))]);
        // duality pairing is the identity matrix
        for a in 0..3 {
            for b in 0..3 {
                let expect = if a == b { Rat::one() } else { Rat::zero() };
                assert_eq!(lie.pairing(a, b), expect);
            }
        }
    }

    #[test]
    fn torus_brackets_are_abelian() {
        let (_, lie) = torus1();
        assert!(lie.bracket(0, 0).is_empty());
    }

    #[test]
    fn invariant_derivations() {
        let (h, lie) = torus1();
        let x = Element::gen_named(&h.alg, "x").unwrap();
        let rl = lie.rho_l(0).unwrap();
        let rr = lie.rho_r(0).unwrap();
        // rho^L(t)(x^k) = k x^k, rho^R(t)(x^k) = -k x^k
        for k in [-2i32, 1, 3] {
            let xk = x.pow(k).unwrap();
            assert_eq!(rl.apply(&xk).unwrap(), xk.scale(&Scalar::from_int(k as i64)));
            assert_eq!(rr.apply(&xk).unwrap(), xk.scale(&Scalar::from_int(-(k as i64))));
        }
        assert!(rl.apply(&Element::one(&h.alg)).unwrap().is_zero());

        let (h2, lie2) = sl2();
        let rl_e = lie2.rho_l(0).unwrap();
        let a = h2.alg.by_name("a").unwrap();
        let b = Element::gen_named(&h2.alg, "b").unwrap();
        // rho^L(e)(a) = b with the frozen basis convention e(c) = 1
        assert_eq!(rl_e.on_gen(a), b);
    }

    #[test]
    fn invariant_actions_represent_brackets() {
        // Orientation frozen after direct computation on SL2: with the
        // convolution bracket [s,t] = s*t - t*s, BOTH invariant actions are
        // Lie homomorphisms, [rho^L(s), rho^L(t)] = rho^L([s,t]) and
        // [rho^R(s), rho^R(t)] = rho^R([s,t]), and they commute with each
        // other. (The antipode in rho^R reverses order twice.)
        let (h, lie) = sl2();
        for s in 0..3 {
            for t in 0..3 {
                let ls = lie.rho_l(s).unwrap();
                let lt = lie.rho_l(t).unwrap();
                let rs = lie.rho_r(s).unwrap();
                let rt = lie.rho_r(t).unwrap();
                for g in h.alg.gen_ids() {
                    let mut bl = Element::zero(&h.alg);
                    let mut br = Element::zero(&h.alg);
                    for (c, v) in lie.bracket(s, t) {
                        bl = bl
                            .add(&lie.rho_l(c).unwrap().on_gen(g).scale_rat(&v))
                            .unwrap();
                        br = br
                            .add(&lie.rho_r(c).unwrap().on_gen(g).scale_rat(&v))
                            .unwrap();
                    }
                    assert_eq!(ls.commutator_on_gen(&lt, g).unwrap(), bl);
                    assert_eq!(rs.commutator_on_gen(&rt, g).unwrap(), br);
                    // left and right invariant actions commute
                    assert!(ls.commutator_on_gen(&rt, g).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn adjoint_coaction_torus_trivial() {
        let (h, lie) = torus1();
        let ad = lie.adjoint_coaction(0);
        assert_eq!(ad.len(), 1);
        assert_eq!(ad[0].0, 0);
        assert_eq!(ad[0].1, Element::one(&h.alg));
    }

    #[test]
    fn adjoint_coaction_sl2() {
        let (h, lie) = sl2();
        let g = |n: &str| Element::gen_named(&h.alg, n).unwrap();
        let (b, d) = (g("b"), g("d"));
        // rho_g(e) = e x d^2 - h x bd - f x b^2
        let col_e = lie.adjoint_coaction(0);
        let expect = vec![
            (0, d.mul(&d).unwrap()),
            (1, b.mul(&d).unwrap().neg()),
            (2, b.mul(&b).unwrap().neg()),
        ];
        assert_eq!(col_e, expect);
        // counit law: (id x eps) . adjoint = id on the basis
        for bidx in 0..3 {
            for (cidx, coeff) in lie.adjoint_coaction(bidx) {
                let e = h.counit(&coeff).eval_zero();
                let expect = if cidx == bidx { Rat::one() } else { Rat::zero() };
                assert_eq!(e, expect);
            }
        }
        // pairing equivariance: sum_c D^a_c C^c_b = delta^a_b
        for a_ in 0..3 {
            for b_ in 0..3 {
                let mut acc = Element::zero(&h.alg);
                for c_ in 0..3 {
                    acc = acc
                        .add(&lie.coadjoint[a_][c_].mul(&lie.adjoint[c_][b_]).unwrap())
                        .unwrap();
                }
                let expect = if a_ == b_ {
                    Element::one(&h.alg)
                } else {
                    Element::zero(&h.alg)
                };
                assert_eq!(acc, expect);
            }
        }
        // induced Lie action on the Lie algebra equals the bracket
        for a_ in 0..3 {
            for b_ in 0..3 {
                assert_eq!(lie.adjoint_lie_action(a_, b_), lie.bracket(a_, b_));
            }
        }
    }

    #[test]
    fn right_invariant_expands_in_left_frame() {
        // rho^R(t) = -S(t_(1)) rho^L(t_(0)) as derivations; checked through
        // the generic frame expansion. On SL2 for t = e this reads
        // rho^R(e) = -a^2 rho^L(e) - ab rho^L(h) + b^2 rho^L(f).
        let (h, lie) = sl2();
        let rr = lie.rho_r(0).unwrap();
        let coeffs = lie.expand_in_left_frame(&rr).unwrap();
        let g = |n: &str| Element::gen_named(&h.alg, n).unwrap();
        let (a, b) = (g("a"), g("b"));
        let expect = vec![
            (0, a.mul(&a).unwrap().neg()),
            (1, a.mul(&b).unwrap().neg()),
            (2, b.mul(&b).unwrap()),
        ];
        assert_eq!(coeffs, expect);
        // the adjoint-coaction identity holds for every basis element
        for t in 0..3 {
            let rr = lie.rho_r(t).unwrap();
            let coeffs = lie.expand_in_left_frame(&rr).unwrap();
            let mut expect: HashMap<usize, Element> = HashMap::new();
            for (c, coeff) in lie.adjoint_coaction(t) {
                expect.insert(c, h.antipode(&coeff).unwrap().neg());
            }
            for (b, c) in coeffs {
                assert_eq!(c, expect.remove(&b).unwrap());
            }
            assert!(expect.values().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn tensor_hopf_factors_are_independent() {
        let h = Hopf::tensor(
            "O(G(U))",
            vec![
                (GroupKind::Torus { rank: 1 }, Tag::Vertex("v1".into())),
                (GroupKind::Torus { rank: 1 }, Tag::Vertex("v2".into())),
            ],
            Block::Coord,
        );
        let lie = h.lie_data().unwrap();
        assert_eq!(lie.dim(), 2);
        assert!(lie.bracket(0, 1).is_empty());
        let x1 = Element::gen_named(&h.alg, "x_v1").unwrap();
        // t_v2 acts trivially on the v1 factor
        let rl = lie.rho_l(1).unwrap();
        assert!(rl.apply(&x1).unwrap().is_zero());
    }
}
