//! Chevalley-Eilenberg stacky CDGAs, CE modules, functoriality maps, and
//! the cosimplicial resolution of quotient constructions.
//!
//! `build_ce` attaches ghost generators `theta^a` of bidegree (1,0) to a
//! chain CDGA `B` with a Lie action and equips the result with
//! `delta(b) = theta^a rho(t_a)(b)`,
//! `delta(theta^a) = -1/2 f^a_{bc} theta^b theta^c`.
//!
//! `build_level` produces the `n`-th cosimplicial level
//! `CE(g^{n+1}, B x H^n)` with slot-tagged generators `h<k>` (k = 1..n)
//! and `theta<j>` (j = 0..n): the summand `t<j>` acts on `B` for j = 0, by
//! right-invariant derivations on the slot-(j+1) Hopf copy and by
//! left-invariant derivations on the slot-j copy. Coface and codegeneracy
//! maps follow the simplicial structure of the underlying nerve; all of
//! them commute with both differentials (verified generator-wise in the
//! suites).

use crate::algebra::{Algebra, Element, Mode, Monomial, PairRewrite};
use crate::derivation::{Derivation, GradedMap};
use crate::error::{CdgaError, Result};
use crate::grading::Bidegree;
use crate::hopf::{lie_eval_monomial, Hopf, LieData};
use crate::scalar::{Rat, Scalar};
use crate::symbol::{Block, GenId, GenInfo, GenKey, Tag};
use crate::tensor::Tensor;
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::Arc;

/// A finite-dimensional Lie algebra presented by structure constants.
#[derive(Clone)]
pub struct AbstractLie {
    pub names: Vec<String>,
    pub tags: Vec<Tag>,
    pub indices: Vec<u32>,
    /// Factor id per basis element; brackets vanish across factors.
    pub factors: Vec<usize>,
    structure: HashMap<(usize, usize), Vec<(usize, Rat)>>,
}

impl AbstractLie {
    pub fn new(
        names: Vec<String>,
        brackets: &[((usize, usize), Vec<(usize, Rat)>)],
    ) -> Result<Self> {
        let n = names.len();
        let lie = AbstractLie {
            tags: vec![Tag::None; n],
            indices: (0..n as u32).collect(),
            factors: vec![0; n],
            names,
            structure: brackets.iter().cloned().collect(),
        };
        lie.check_antisymmetry_and_jacobi()?;
        Ok(lie)
    }

    /// sl2 with basis (e, h, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
    pub fn sl2() -> Self {
        let r = |v: i64| Rat::from_integer(v.into());
        AbstractLie::new(
            vec!["e".into(), "h".into(), "f".into()],
            &[
                ((1, 0), vec![(0, r(2))]),
                ((0, 1), vec![(0, r(-2))]),
                ((1, 2), vec![(2, r(-2))]),
                ((2, 1), vec![(2, r(2))]),
                ((0, 2), vec![(1, r(1))]),
                ((2, 0), vec![(1, r(-1))]),
            ],
        )
        .expect("sl2 structure constants satisfy Jacobi")
    }

    pub fn abelian(rank: usize) -> Self {
        let names = if rank == 1 {
            vec!["t".to_string()]
        } else {
            (1..=rank).map(|i| format!("t{}", i)).collect()
        };
        AbstractLie::new(names, &[]).expect("abelian brackets")
    }

    pub fn from_lie_data(lie: &LieData) -> Self {
        let n = lie.dim();
        let mut structure = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                let br = lie.bracket(a, b);
                if !br.is_empty() {
                    structure.insert((a, b), br);
                }
            }
        }
        AbstractLie {
            names: lie.basis.iter().map(|b| b.name.clone()).collect(),
            tags: lie.basis.iter().map(|b| b.tag.clone()).collect(),
            indices: lie.basis.iter().map(|b| b.index as u32).collect(),
            factors: lie.basis.iter().map(|b| b.factor).collect(),
            structure,
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

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

    fn check_antisymmetry_and_jacobi(&self) -> Result<()> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.structure_constant(c, a, b) + self.structure_constant(c, b, a)
                        != Rat::zero()
                    {
                        return Err(CdgaError::NotLieAction {
                            a: self.names[a].clone(),
                            b: self.names[b].clone(),
                            gen: "antisymmetry".into(),
                        });
                    }
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
                                a: self.names[a].clone(),
                                b: self.names[b].clone(),
                                gen: "jacobi".into(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A coaction `B -> B x H` given on generators and extended
/// multiplicatively.
#[derive(Clone)]
pub struct Coaction {
    pub hopf: Arc<Hopf>,
    pub table: HashMap<GenId, Tensor>,
}

impl Coaction {
    pub fn on_gen(&self, g: GenId) -> &Tensor {
        &self.table[&g]
    }

    pub fn on_monomial(&self, alg: &Arc<Algebra>, m: &Monomial) -> Result<Tensor> {
        let mut acc = Tensor::unit(vec![alg.clone(), self.hopf.alg.clone()]);
        for &(g, k) in &m.0 {
            acc = acc.mul(&self.table[&g].pow(k)?)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, x: &Element) -> Result<Tensor> {
        let mut acc = Tensor::zero(vec![x.alg().clone(), self.hopf.alg.clone()]);
        for (m, c) in x.terms() {
            acc = acc.add(&self.on_monomial(x.alg(), m)?.scale(c))?;
        }
        Ok(acc)
    }

    /// The induced Lie action `rho(t)(b) = b_(0) t(b_(1))` of a basis
    /// element of the gauge Lie algebra, as a derivation of `B`.
    pub fn lie_action(&self, alg: &Arc<Algebra>, lie: &LieData, a: usize) -> Result<Derivation> {
        let mut table = HashMap::new();
        for (&g, coact) in &self.table {
            let mut acc = Element::zero(alg);
            for (ms, c) in &coact.terms {
                let v = lie_eval_monomial(&self.hopf, &lie.basis[a].values, &ms[1]);
                if !v.is_zero() {
                    acc = acc
                        .add(&Element::from_monomial(alg, ms[0].clone(), c.clone()).scale_rat(&v))?;
                }
            }
            if !acc.is_zero() {
                table.insert(g, acc);
            }
        }
        Ok(Derivation::new(
            format!("rho({})", lie.basis[a].name),
            alg,
            Bidegree::ZERO,
            table,
        ))
    }

    /// Counit law `(id x eps) . rho = id` on all generators.
    pub fn is_counital(&self, alg: &Arc<Algebra>) -> Result<bool> {
        for (&g, coact) in &self.table {
            let collapsed = coact
                .contract_slot(1, |m| self.hopf.counit_monomial(m))
                .into_element()?;
            if collapsed != Element::gen(alg, g) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coassociativity `(rho x id) . rho = (id x Delta) . rho` on all
    /// generators.
    pub fn is_coassociative(&self, alg: &Arc<Algebra>) -> Result<bool> {
        for coact in self.table.values() {
            let left = coact.expand_slot(0, vec![alg.clone(), self.hopf.alg.clone()], |m| {
                self.on_monomial(alg, m)
            })?;
            let right = self.hopf.comultiply_slot(coact, 1)?;
            if left != right {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A nonnegatively graded chain CDGA with differential and (optionally) a
/// gauge coaction.
#[derive(Clone)]
pub struct ChainCdga {
    pub alg: Arc<Algebra>,
    pub del: Derivation,
    pub coaction: Option<Coaction>,
}

/// A stacky CDGA: a bigraded commutative algebra with anticommuting chain
/// differential `del` of bidegree (0,-1) and cochain differential `delta`
/// of bidegree (1,0).
#[derive(Clone)]
pub struct StackyCdga {
    pub alg: Arc<Algebra>,
    pub del: Derivation,
    pub delta: Derivation,
}

impl StackyCdga {
    /// `del^2 = 0, delta^2 = 0, del delta + delta del = 0`, each checked
    /// on all generators; returns the first violated identity.
    pub fn bicomplex_witness(&self) -> Result<Option<String>> {
        if let Some((g, _)) = self.del.square_zero_witness()? {
            return Ok(Some(format!("del^2 != 0 at {}", g)));
        }
        if let Some((g, _)) = self.delta.square_zero_witness()? {
            return Ok(Some(format!("delta^2 != 0 at {}", g)));
        }
        if !self.del.anticommutes_with(&self.delta)? {
            return Ok(Some("del delta + delta del != 0".into()));
        }
        Ok(None)
    }

    /// The totalized differential `d = del + delta`.
    pub fn total_apply(&self, x: &Element) -> Result<Element> {
        self.del.apply(x)?.add(&self.delta.apply(x)?)
    }
}

/// Output of `build_ce`: the stacky CDGA together with the embedding of
/// `B` and the ghost generators per Lie basis element.
pub struct CeAlgebra {
    pub stacky: StackyCdga,
    pub lie: AbstractLie,
    pub ghosts: Vec<GenId>,
    pub b_embed: GradedMap,
    pub b_gens: HashMap<GenId, GenId>,
}

fn ghost_info(lie: &AbstractLie, a: usize, slot: u8) -> GenInfo {
    let name = if slot == 0 && lie.tags[a] == Tag::None {
        format!("th_{}", lie.names[a])
    } else {
        format!("th_{}<{}>", lie.names[a], slot)
    };
    GenInfo::new(
        name,
        GenKey::new(Block::Ghost, slot, lie.tags[a].clone(), lie.indices[a]),
        Bidegree::new(1, 0),
    )
}

fn translate_monomial(m: &Monomial, map: &HashMap<GenId, GenId>) -> Monomial {
    let mut fs: Vec<(GenId, i32)> = m.0.iter().map(|&(g, k)| (map[&g], k)).collect();
    fs.sort_by_key(|&(g, _)| g);
    Monomial(fs)
}

pub(crate) fn translate_rewrites(
    src: &Arc<Algebra>,
    map: &HashMap<GenId, GenId>,
) -> Vec<PairRewrite> {
    match &src.mode {
        Mode::Commutative { rewrites } => rewrites
            .iter()
            .map(|r| PairRewrite {
                a: map[&r.a],
                b: map[&r.b],
                replacement: r
                    .replacement
                    .iter()
                    .map(|(m, c)| (translate_monomial(m, map), c.clone()))
                    .collect(),
            })
            .collect(),
        Mode::Quantized(_) => Vec::new(),
    }
}

/// Chevalley-Eilenberg stacky CDGA of a Lie algebra acting on a chain
/// CDGA by derivations. The action must be a Lie algebra homomorphism on
/// generators; otherwise construction is refused with the offending pair.
pub fn build_ce(lie: &AbstractLie, base: &ChainCdga, action: &[Derivation]) -> Result<CeAlgebra> {
    assert_eq!(action.len(), lie.dim(), "one action derivation per basis element");
    // Lie homomorphism check: [rho_a, rho_b] = f^c_{ab} rho_c on generators
    for a in 0..lie.dim() {
        for b in 0..lie.dim() {
            for g in base.alg.gen_ids() {
                let mut rhs = Element::zero(&base.alg);
                for (c, v) in lie.bracket(a, b) {
                    rhs = rhs.add(&action[c].on_gen(g).scale_rat(&v))?;
                }
                let lhs = action[a].commutator_on_gen(&action[b], g)?;
                if lhs != rhs {
                    return Err(CdgaError::NotLieAction {
                        a: lie.names[a].clone(),
                        b: lie.names[b].clone(),
                        gen: base.alg.info(g).name.clone(),
                    });
                }
            }
        }
    }

    let mut gens: Vec<GenInfo> = base.alg.gens().to_vec();
    for a in 0..lie.dim() {
        gens.push(ghost_info(lie, a, 0));
    }
    let b_alg = base.alg.clone();
    let alg =
        Algebra::commutative_with_rewrites(format!("CE({})", base.alg.name), gens, move |alg| {
            let map: HashMap<GenId, GenId> = b_alg
                .gen_ids()
                .map(|g| (g, alg.by_name(&b_alg.info(g).name).unwrap()))
                .collect();
            translate_rewrites(&b_alg, &map)
        });

    let b_gens: HashMap<GenId, GenId> = base
        .alg
        .gen_ids()
        .map(|g| (g, alg.by_name(&base.alg.info(g).name).unwrap()))
        .collect();
    let ghosts: Vec<GenId> = (0..lie.dim())
        .map(|a| alg.by_name(&ghost_info(lie, a, 0).name).unwrap())
        .collect();
    let b_embed = GradedMap::new(
        "b_embed",
        &base.alg,
        &alg,
        b_gens
            .iter()
            .map(|(&g, &h)| (g, Element::gen(&alg, h)))
            .collect(),
    );

    // chain differential: transported from B, zero on ghosts
    let mut del_table = HashMap::new();
    for g in base.alg.gen_ids() {
        let v = base.del.on_gen(g);
        if !v.is_zero() {
            del_table.insert(b_gens[&g], b_embed.apply(&v)?);
        }
    }
    let del = Derivation::new("del", &alg, Bidegree::new(0, -1), del_table);

    // cochain differential
    let mut delta_table = HashMap::new();
    for g in base.alg.gen_ids() {
        let mut acc = Element::zero(&alg);
        for a in 0..lie.dim() {
            let v = action[a].on_gen(g);
            if !v.is_zero() {
                acc = acc.add(&Element::gen(&alg, ghosts[a]).mul(&b_embed.apply(&v)?)?)?;
            }
        }
        if !acc.is_zero() {
            delta_table.insert(b_gens[&g], acc);
        }
    }
    let half = Scalar::from_frac(-1, 2);
    for a in 0..lie.dim() {
        let mut acc = Element::zero(&alg);
        for b in 0..lie.dim() {
            for c in 0..lie.dim() {
                let f = lie.structure_constant(a, b, c);
                if !f.is_zero() {
                    let tt =
                        Element::gen(&alg, ghosts[b]).mul(&Element::gen(&alg, ghosts[c]))?;
                    acc = acc.add(&tt.scale_rat(&f))?;
                }
            }
        }
        if !acc.is_zero() {
            delta_table.insert(ghosts[a], acc.scale(&half));
        }
    }
    let delta = Derivation::new("delta", &alg, Bidegree::new(1, 0), delta_table);

    Ok(CeAlgebra {
        stacky: StackyCdga { alg, del, delta },
        lie: lie.clone(),
        ghosts,
        b_embed,
        b_gens,
    })
}

/// Functoriality of CE algebras: given a Lie map `kappa_tilde : g' -> g`
/// (`kappa_tilde[b][a]` is the `t_b`-coefficient of the image of `t'_a`)
/// and an algebra map `kappa : B -> B'` equivariant relative to it,
/// produce the stacky CDGA morphism `CE(g, B) -> CE(g', B')` sending `b`
/// to `kappa(b)` and `theta^b` to the dual image `sum_a M[b][a] theta'^a`.
pub fn ce_map(
    ce: &CeAlgebra,
    ce_target: &CeAlgebra,
    kappa: &GradedMap,
    kappa_tilde: &[Vec<Rat>],
    action: &[Derivation],
    action_target: &[Derivation],
) -> Result<GradedMap> {
    let g = ce.lie.dim();
    let g2 = ce_target.lie.dim();
    assert_eq!(kappa_tilde.len(), g, "kappa_tilde rows index the source basis");
    // equivariance: rho'(t'_a)(kappa(b)) = kappa(rho(kappa_tilde(t'_a))(b))
    for a in 0..g2 {
        for bg in kappa.src.gen_ids() {
            let lhs = action_target[a].apply(&kappa.on_gen(bg)?)?;
            let mut pulled = Element::zero(&kappa.src);
            for b in 0..g {
                let coeff = &kappa_tilde[b][a];
                if !coeff.is_zero() {
                    pulled = pulled.add(&action[b].on_gen(bg).scale_rat(coeff))?;
                }
            }
            let rhs = kappa.apply(&pulled)?;
            if lhs != rhs {
                return Err(CdgaError::Equivariance {
                    map: "ce_map".into(),
                    gen: kappa.src.info(bg).name.clone(),
                });
            }
        }
    }

    let mut table = HashMap::new();
    let target_embed = &ce_target.b_embed;
    for bg in kappa.src.gen_ids() {
        table.insert(ce.b_gens[&bg], target_embed.apply(&kappa.on_gen(bg)?)?);
    }
    for b in 0..g {
        let mut acc = Element::zero(&ce_target.stacky.alg);
        for a in 0..g2 {
            let coeff = &kappa_tilde[b][a];
            if !coeff.is_zero() {
                acc = acc.add(
                    &Element::gen(&ce_target.stacky.alg, ce_target.ghosts[a]).scale_rat(coeff),
                )?;
            }
        }
        table.insert(ce.ghosts[b], acc);
    }
    let map = GradedMap::new("ce_map", &ce.stacky.alg, &ce_target.stacky.alg, table);
    // compatibility with both differentials
    if let Some(g) = map.chain_compat_witness(&ce.stacky.del, &ce_target.stacky.del)? {
        return Err(CdgaError::Equivariance {
            map: "ce_map/del".into(),
            gen: g,
        });
    }
    if let Some(g) = map.chain_compat_witness(&ce.stacky.delta, &ce_target.stacky.delta)? {
        return Err(CdgaError::Equivariance {
            map: "ce_map/delta".into(),
            gen: g,
        });
    }
    Ok(map)
}

/// The `n`-th level of the cosimplicial resolution:
/// `CE(g^{n+1}, B x H^n)`.
pub struct Level {
    pub n: usize,
    pub stacky: StackyCdga,
    pub base: ChainCdga,
    pub gauge: Arc<Hopf>,
    pub lie: Arc<LieData>,
    /// Embedding of `B` generators.
    pub b_gens: HashMap<GenId, GenId>,
    /// Hopf-slot generator ids: `hopf_gens[k-1][h]` for slot k = 1..n.
    pub hopf_gens: Vec<HashMap<GenId, GenId>>,
    /// Ghost ids: `ghosts[j][a]` for slot j = 0..n, Lie basis index a.
    pub ghosts: Vec<Vec<GenId>>,
}

impl Level {
    pub fn alg(&self) -> &Arc<Algebra> {
        &self.stacky.alg
    }

    pub fn b_embed(&self) -> GradedMap {
        GradedMap::new(
            "b_embed",
            &self.base.alg,
            &self.stacky.alg,
            self.b_gens
                .iter()
                .map(|(&g, &h)| (g, Element::gen(&self.stacky.alg, h)))
                .collect(),
        )
    }

    /// Embedding of the gauge Hopf algebra into slot `k` (1-based).
    pub fn slot_embed(&self, k: usize) -> GradedMap {
        GradedMap::new(
            format!("slot<{}>", k),
            &self.gauge.alg,
            &self.stacky.alg,
            self.hopf_gens[k - 1]
                .iter()
                .map(|(&g, &h)| (g, Element::gen(&self.stacky.alg, h)))
                .collect(),
        )
    }

    pub fn ghost(&self, j: usize, a: usize) -> Element {
        Element::gen(&self.stacky.alg, self.ghosts[j][a])
    }
}

fn slot_gen_info(hopf: &Hopf, g: GenId, k: u8) -> GenInfo {
    let info = hopf.alg.info(g);
    let mut out = GenInfo::new(
        format!("{}<{}>", info.name, k),
        GenKey::new(Block::HopfSlot, k, info.key.tag.clone(), info.key.index),
        Bidegree::ZERO,
    );
    if info.invertible {
        out = out.invertible();
    }
    out
}

/// Builds the cosimplicial level `n >= 0`. The base must carry a counital
/// coaction of the gauge Hopf algebra.
pub fn build_level(
    n: usize,
    base: &ChainCdga,
    gauge: &Arc<Hopf>,
    lie: &Arc<LieData>,
) -> Result<Arc<Level>> {
    let coaction = base
        .coaction
        .clone()
        .ok_or_else(|| CdgaError::Shape("base has no gauge coaction".into()))?;
    if !coaction.is_counital(&base.alg)? {
        return Err(CdgaError::Equivariance {
            map: "coaction".into(),
            gen: "counit".into(),
        });
    }

    let abstract_lie = AbstractLie::from_lie_data(lie);
    let dim = lie.dim();

    let mut gens: Vec<GenInfo> = base.alg.gens().to_vec();
    for k in 1..=n {
        for g in gauge.alg.gen_ids() {
            gens.push(slot_gen_info(gauge, g, k as u8));
        }
    }
    for j in 0..=n {
        for a in 0..dim {
            let mut info = ghost_info(&abstract_lie, a, j as u8);
            info.name = format!("th_{}<{}>", abstract_lie.names[a], j);
            gens.push(info);
        }
    }

    let base_alg = base.alg.clone();
    let gauge_alg = gauge.alg.clone();
    let slots = n;
    let alg = Algebra::commutative_with_rewrites(
        format!("CE{}({})", n, base.alg.name),
        gens,
        move |alg| {
            let map: HashMap<GenId, GenId> = base_alg
                .gen_ids()
                .map(|g| (g, alg.by_name(&base_alg.info(g).name).unwrap()))
                .collect();
            let mut rw = translate_rewrites(&base_alg, &map);
            for k in 1..=slots {
                let map_k: HashMap<GenId, GenId> = gauge_alg
                    .gen_ids()
                    .map(|g| {
                        (
                            g,
                            alg.by_name(&format!("{}<{}>", gauge_alg.info(g).name, k))
                                .unwrap(),
                        )
                    })
                    .collect();
                rw.extend(translate_rewrites(&gauge_alg, &map_k));
            }
            rw
        },
    );

    let b_gens: HashMap<GenId, GenId> = base
        .alg
        .gen_ids()
        .map(|g| (g, alg.by_name(&base.alg.info(g).name).unwrap()))
        .collect();
    let hopf_gens: Vec<HashMap<GenId, GenId>> = (1..=n)
        .map(|k| {
            gauge
                .alg
                .gen_ids()
                .map(|g| {
                    (
                        g,
                        alg.by_name(&format!("{}<{}>", gauge.alg.info(g).name, k))
                            .unwrap(),
                    )
                })
                .collect()
        })
        .collect();
    let ghosts: Vec<Vec<GenId>> = (0..=n)
        .map(|j| {
            (0..dim)
                .map(|a| {
                    alg.by_name(&format!("th_{}<{}>", abstract_lie.names[a], j))
                        .unwrap()
                })
                .collect()
        })
        .collect();

    let b_embed = GradedMap::new(
        "b_embed",
        &base.alg,
        &alg,
        b_gens
            .iter()
            .map(|(&g, &h)| (g, Element::gen(&alg, h)))
            .collect(),
    );

    // chain differential
    let mut del_table = HashMap::new();
    for g in base.alg.gen_ids() {
        let v = base.del.on_gen(g);
        if !v.is_zero() {
            del_table.insert(b_gens[&g], b_embed.apply(&v)?);
        }
    }
    let del = Derivation::new("del", &alg, Bidegree::new(0, -1), del_table);

    // cochain differential
    let mut delta_table: HashMap<GenId, Element> = HashMap::new();
    for g in base.alg.gen_ids() {
        let mut acc = Element::zero(&alg);
        for a in 0..dim {
            let act = coaction.lie_action(&base.alg, lie, a)?;
            let v = act.on_gen(g);
            if !v.is_zero() {
                acc = acc.add(&Element::from_monomial(&alg, Monomial::gen(ghosts[0][a]), Scalar::one()).mul(&b_embed.apply(&v)?)?)?;
            }
        }
        if !acc.is_zero() {
            delta_table.insert(b_gens[&g], acc);
        }
    }
    for k in 1..=n {
        let embed_k = GradedMap::new(
            "slot",
            &gauge.alg,
            &alg,
            hopf_gens[k - 1]
                .iter()
                .map(|(&g, &h)| (g, Element::gen(&alg, h)))
                .collect::<HashMap<_, _>>(),
        );
        for g in gauge.alg.gen_ids() {
            let mut acc = Element::zero(&alg);
            for a in 0..dim {
                let rr = lie.rho_r(a)?.on_gen(g);
                if !rr.is_zero() {
                    acc = acc
                        .add(&Element::gen(&alg, ghosts[k - 1][a]).mul(&embed_k.apply(&rr)?)?)?;
                }
                let rl = lie.rho_l(a)?.on_gen(g);
                if !rl.is_zero() {
                    acc = acc.add(&Element::gen(&alg, ghosts[k][a]).mul(&embed_k.apply(&rl)?)?)?;
                }
            }
            if !acc.is_zero() {
                delta_table.insert(hopf_gens[k - 1][&g], acc);
            }
        }
    }
    let half = Scalar::from_frac(-1, 2);
    for j in 0..=n {
        for a in 0..dim {
            let mut acc = Element::zero(&alg);
            for b in 0..dim {
                for c in 0..dim {
                    let f = abstract_lie.structure_constant(a, b, c);
                    if !f.is_zero() {
                        let tt = Element::gen(&alg, ghosts[j][b])
                            .mul(&Element::gen(&alg, ghosts[j][c]))?;
                        acc = acc.add(&tt.scale_rat(&f))?;
                    }
                }
            }
            if !acc.is_zero() {
                delta_table.insert(ghosts[j][a], acc.scale(&half));
            }
        }
    }
    let delta = Derivation::new("delta", &alg, Bidegree::new(1, 0), delta_table);

    Ok(Arc::new(Level {
        n,
        stacky: StackyCdga { alg, del, delta },
        base: base.clone(),
        gauge: gauge.clone(),
        lie: lie.clone(),
        b_gens,
        hopf_gens,
        ghosts,
    }))
}

/// The `i`-th coface map `d^i : level(n-1) -> level(n)`, `0 <= i <= n`.
pub fn coface(i: usize, from: &Level, to: &Level) -> Result<GradedMap> {
    let n = to.n;
    if from.n + 1 != n || i > n {
        return Err(CdgaError::SlotRange { i, n });
    }
    let coaction = from
        .base
        .coaction
        .as_ref()
        .ok_or_else(|| CdgaError::Shape("coface needs a coaction".into()))?;

    let mut table = HashMap::new();
    let b_embed = to.b_embed();
    let dim = to.lie.dim();

    // B generators
    for g in from.base.alg.gen_ids() {
        let img = if i == 0 {
            // b -> b_(0) b_(1)<1>
            let coact = coaction.on_gen(g);
            let mut acc = Element::zero(to.alg());
            for (ms, c) in &coact.terms {
                let b_part = Element::from_monomial(&from.base.alg, ms[0].clone(), c.clone());
                let h_part =
                    Element::from_monomial(&from.gauge.alg, ms[1].clone(), Scalar::one());
                acc = acc
                    .add(&b_embed.apply(&b_part)?.mul(&to.slot_embed(1).apply(&h_part)?)?)?;
            }
            acc
        } else {
            b_embed.apply(&Element::gen(&from.base.alg, g))?
        };
        table.insert(from.b_gens[&g], img);
    }

    // Hopf slot generators h<j>, j = 1..n-1
    for j in 1..=from.n {
        for g in from.gauge.alg.gen_ids() {
            let img = if i <= j - 1 {
                to.slot_embed(j + 1)
                    .apply(&Element::gen(&from.gauge.alg, g))?
            } else if i == j {
                // h<j> -> h_(1)<j> h_(2)<j+1>
                let delta_h = from.gauge.comul_gen(g);
                let mut acc = Element::zero(to.alg());
                for (ms, c) in &delta_h.terms {
                    let l = to.slot_embed(j).apply(&Element::from_monomial(
                        &from.gauge.alg,
                        ms[0].clone(),
                        c.clone(),
                    ))?;
                    let r = to.slot_embed(j + 1).apply(&Element::from_monomial(
                        &from.gauge.alg,
                        ms[1].clone(),
                        Scalar::one(),
                    ))?;
                    acc = acc.add(&l.mul(&r)?)?;
                }
                acc
            } else {
                to.slot_embed(j).apply(&Element::gen(&from.gauge.alg, g))?
            };
            table.insert(from.hopf_gens[j - 1][&g], img);
        }
    }

    // ghosts theta<j>, j = 0..n-1
    for j in 0..=from.n {
        for a in 0..dim {
            let img = if i <= j {
                to.ghost(j + 1, a)
            } else {
                to.ghost(j, a)
            };
            table.insert(from.ghosts[j][a], img);
        }
    }

    Ok(GradedMap::new(
        format!("d^{}", i),
        from.alg(),
        to.alg(),
        table,
    ))
}

/// The `i`-th codegeneracy map `s^i : level(n+1) -> level(n)`, `0 <= i <= n`.
pub fn codegeneracy(i: usize, from: &Level, to: &Level) -> Result<GradedMap> {
    let n = to.n;
    if from.n != n + 1 || i > n {
        return Err(CdgaError::SlotRange { i, n });
    }
    let mut table = HashMap::new();
    let b_embed = to.b_embed();
    let dim = to.lie.dim();

    for g in from.base.alg.gen_ids() {
        table.insert(
            from.b_gens[&g],
            b_embed.apply(&Element::gen(&from.base.alg, g))?,
        );
    }
    for j in 1..=from.n {
        for g in from.gauge.alg.gen_ids() {
            let img = if i + 2 <= j {
                to.slot_embed(j - 1)
                    .apply(&Element::gen(&from.gauge.alg, g))?
            } else if i + 1 == j {
                Element::scalar(to.alg(), Scalar::from_rat(from.gauge.counit_gen(g)))
            } else {
                to.slot_embed(j).apply(&Element::gen(&from.gauge.alg, g))?
            };
            table.insert(from.hopf_gens[j - 1][&g], img);
        }
    }
    for j in 0..=from.n {
        for a in 0..dim {
            let img = if i + 1 <= j {
                to.ghost(j - 1, a)
            } else {
                to.ghost(j, a)
            };
            table.insert(from.ghosts[j][a], img);
        }
    }

    Ok(GradedMap::new(
        format!("s^{}", i),
        from.alg(),
        to.alg(),
        table,
    ))
}

/// A finite free CE module over a [`CeAlgebra`]: a free graded module with
/// chain differential and Lie action given on the basis. The cochain
/// differential `delta(s) = theta^a rho_V(t_a)(s)` squares to zero exactly
/// when `rho_V` is a Lie action (checked both ways in the tests).
pub struct CeModule {
    pub name: String,
    pub basis: Vec<(String, i32)>,
    /// `del_V(s_k)` with coefficients in the CE algebra.
    pub del_v: Vec<ModElem>,
    /// `rho_V(t_a)(s_k)` per Lie basis element `a`.
    pub rho_v: Vec<Vec<ModElem>>,
}

/// Module elements: sums `coeff * s_k` with the coefficient kept on the
/// left in the CE algebra.
pub type ModElem = Vec<(usize, Element)>;

fn mod_add(alg: &Arc<Algebra>, xs: ModElem, ys: ModElem) -> Result<ModElem> {
    let mut acc: HashMap<usize, Element> = HashMap::new();
    for (k, c) in xs.into_iter().chain(ys) {
        let entry = acc.entry(k).or_insert_with(|| Element::zero(alg));
        *entry = entry.add(&c)?;
    }
    let mut out: Vec<(usize, Element)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    out.sort_by_key(|&(k, _)| k);
    Ok(out)
}

impl CeModule {
    pub fn zero(name: impl Into<String>, lie_dim: usize) -> Self {
        CeModule {
            name: name.into(),
            basis: Vec::new(),
            del_v: Vec::new(),
            rho_v: vec![Vec::new(); lie_dim],
        }
    }

    fn scale_elem(x: &ModElem, c: &Element) -> Result<ModElem> {
        let mut out = Vec::new();
        for (k, coeff) in x {
            let p = c.mul(coeff)?;
            if !p.is_zero() {
                out.push((*k, p));
            }
        }
        Ok(out)
    }

    /// Chain differential, extending
    /// `del(c * s) = del(c) s + (-1)^{|c|} c del_V(s)`.
    pub fn apply_del(&self, ce: &CeAlgebra, x: &ModElem) -> Result<ModElem> {
        let alg = &ce.stacky.alg;
        let mut acc: ModElem = Vec::new();
        for (k, c) in x {
            let dc = ce.stacky.del.apply(c)?;
            acc = mod_add(alg, acc, vec![(*k, dc)])?;
            for (deg, comp) in c.components() {
                let sign = if deg.is_odd() {
                    Scalar::from_int(-1)
                } else {
                    Scalar::one()
                };
                let scaled = Self::scale_elem(&self.del_v[*k], &comp.scale(&sign))?;
                acc = mod_add(alg, acc, scaled)?;
            }
        }
        Ok(acc)
    }

    /// Cochain differential
    /// `delta(c * s) = delta(c) s + (-1)^{|c|} c theta^a rho_V(t_a)(s)`.
    pub fn apply_delta(&self, ce: &CeAlgebra, x: &ModElem) -> Result<ModElem> {
        let alg = &ce.stacky.alg;
        let mut acc: ModElem = Vec::new();
        for (k, c) in x {
            let dc = ce.stacky.delta.apply(c)?;
            acc = mod_add(alg, acc, vec![(*k, dc)])?;
            for (deg, comp) in c.components() {
                let sign = if deg.is_odd() {
                    Scalar::from_int(-1)
                } else {
                    Scalar::one()
                };
                for a in 0..ce.lie.dim() {
                    let theta = Element::gen(alg, ce.ghosts[a]);
                    let coeff = comp.scale(&sign).mul(&theta)?;
                    let scaled = Self::scale_elem(&self.rho_v[a][*k], &coeff)?;
                    acc = mod_add(alg, acc, scaled)?;
                }
            }
        }
        Ok(acc)
    }

    /// `delta^2 = 0` and `del delta + delta del = 0` on basis elements;
    /// returns the first failure.
    pub fn compat_witness(&self, ce: &CeAlgebra) -> Result<Option<String>> {
        let alg = &ce.stacky.alg;
        for k in 0..self.basis.len() {
            let s: ModElem = vec![(k, Element::one(alg))];
            let d2 = self.apply_delta(ce, &self.apply_delta(ce, &s)?)?;
            if !d2.is_empty() {
                return Ok(Some(format!("delta^2 != 0 on {}", self.basis[k].0)));
            }
            let a = self.apply_del(ce, &self.apply_delta(ce, &s)?)?;
            let b = self.apply_delta(ce, &self.apply_del(ce, &s)?)?;
            if !mod_add(alg, a, b)?.is_empty() {
                return Ok(Some(format!(
                    "del delta + delta del != 0 on {}",
                    self.basis[k].0
                )));
            }
        }
        Ok(None)
    }

    /// Direct check that `rho_V` satisfies the bracket relation
    /// `[rho_V(t_a), rho_V(t_b)] = rho_V([t_a, t_b])` on basis elements.
    pub fn action_is_lie(&self, ce: &CeAlgebra, action: &[Derivation]) -> Result<bool> {
        let alg = &ce.stacky.alg;
        let apply_rho = |a: usize, x: &ModElem| -> Result<ModElem> {
            // rho_V(t_a)(c * s) = rho(t_a)(c) * s + c * rho_V(t_a)(s)
            let mut acc: ModElem = Vec::new();
            for (k, c) in x {
                let rc = action_on_ce(ce, action, a, c)?;
                acc = mod_add(alg, acc, vec![(*k, rc)])?;
                acc = mod_add(alg, acc, Self::scale_elem(&self.rho_v[a][*k], c)?)?;
            }
            Ok(acc)
        };
        for a in 0..ce.lie.dim() {
            for b in 0..ce.lie.dim() {
                for k in 0..self.basis.len() {
                    let s: ModElem = vec![(k, Element::one(alg))];
                    let ab = apply_rho(a, &apply_rho(b, &s)?)?;
                    let ba = apply_rho(b, &apply_rho(a, &s)?)?;
                    let mut lhs =
                        mod_add(alg, ab, ba.into_iter().map(|(k, c)| (k, c.neg())).collect())?;
                    for (c, v) in ce.lie.bracket(a, b) {
                        let scaled: ModElem = self.rho_v[c][k]
                            .iter()
                            .map(|(i, e)| (*i, e.scale_rat(&(-v.clone()))))
                            .collect();
                        lhs = mod_add(alg, lhs, scaled)?;
                    }
                    if !lhs.is_empty() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Transports the Lie action on `B` through the CE embedding (ghosts are
/// inert) and applies it to a coefficient.
fn action_on_ce(ce: &CeAlgebra, action: &[Derivation], a: usize, c: &Element) -> Result<Element> {
    let alg = &ce.stacky.alg;
    let mut table = HashMap::new();
    for (bg, cg) in &ce.b_gens {
        let v = action[a].on_gen(*bg);
        if !v.is_zero() {
            table.insert(*cg, ce.b_embed.apply(&v)?);
        }
    }
    Derivation::new("rho", alg, Bidegree::ZERO, table).apply(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    /// B = Q[x, y] with zero differential.
    fn poly_xy() -> ChainCdga {
        let alg = Algebra::commutative(
            "Q[x,y]",
            vec![
                GenInfo::new("x", GenKey::plain(Block::Coord, 0), Bidegree::ZERO),
                GenInfo::new("y", GenKey::plain(Block::Coord, 1), Bidegree::ZERO),
            ],
        );
        let del = Derivation::zero("del", &alg, Bidegree::new(0, -1));
        ChainCdga {
            alg,
            del,
            coaction: None,
        }
    }

    /// sl2 acting on Q[x,y]: e = x d/dy, f = y d/dx, h = x d/dx - y d/dy.
    fn sl2_on_poly() -> (AbstractLie, ChainCdga, Vec<Derivation>) {
        let lie = AbstractLie::sl2();
        let b = poly_xy();
        let x = b.alg.by_name("x").unwrap();
        let y = b.alg.by_name("y").unwrap();
        let xe = Element::gen(&b.alg, x);
        let ye = Element::gen(&b.alg, y);
        let mk = |name: &str, tx: Element, ty: Element| {
            let mut t = HashMap::new();
            if !tx.is_zero() {
                t.insert(x, tx);
            }
            if !ty.is_zero() {
                t.insert(y, ty);
            }
            Derivation::new(name, &b.alg, Bidegree::ZERO, t)
        };
        let e = mk("e", Element::zero(&b.alg), xe.clone());
        let h = mk("h", xe.clone(), ye.neg());
        let f = mk("f", ye.clone(), Element::zero(&b.alg));
        (lie, b, vec![e, h, f])
    }

    #[test]
    fn sl2_ce_on_polynomials() {
        let (lie, b, action) = sl2_on_poly();
        let ce = build_ce(&lie, &b, &action).unwrap();
        let alg = &ce.stacky.alg;
        let x = alg.by_name("x").unwrap();
        let y = alg.by_name("y").unwrap();
        let th = |n: &str| Element::gen_named(alg, n).unwrap();
        let xe = Element::gen(alg, x);
        let ye = Element::gen(alg, y);
        // delta(x) = th_h x + th_f y ; delta(y) = th_e x - th_h y
        assert_eq!(
            ce.stacky.delta.on_gen(x),
            th("th_h")
                .mul(&xe)
                .unwrap()
                .add(&th("th_f").mul(&ye).unwrap())
                .unwrap()
        );
        assert_eq!(
            ce.stacky.delta.on_gen(y),
            th("th_e")
                .mul(&xe)
                .unwrap()
                .sub(&th("th_h").mul(&ye).unwrap())
                .unwrap()
        );
        // delta(th_e) = -2 th_h th_e
        let e_id = alg.by_name("th_e").unwrap();
        let expect = th("th_h")
            .mul(&th("th_e"))
            .unwrap()
            .scale(&Scalar::from_int(-2));
        assert_eq!(ce.stacky.delta.on_gen(e_id), expect);
        assert!(ce.stacky.bicomplex_witness().unwrap().is_none());
    }

    #[test]
    fn abelian_trivial_action_gives_zero_delta() {
        let lie = AbstractLie::abelian(1);
        let b = poly_xy();
        let action = vec![Derivation::zero("t", &b.alg, Bidegree::ZERO)];
        let ce = build_ce(&lie, &b, &action).unwrap();
        for g in ce.stacky.alg.gen_ids() {
            assert!(ce.stacky.delta.on_gen(g).is_zero());
        }
    }

    #[test]
    fn non_lie_action_is_refused() {
        // e and f as before but h = 0 breaks [e,f] = h
        let (lie, b, mut action) = sl2_on_poly();
        action[1] = Derivation::zero("h", &b.alg, Bidegree::ZERO);
        let err = build_ce(&lie, &b, &action).map(|_| ()).unwrap_err();
        assert!(matches!(err, CdgaError::NotLieAction { .. }));
    }

    #[test]
    fn ce_map_identity_and_failure() {
        let (lie, b, action) = sl2_on_poly();
        let ce = build_ce(&lie, &b, &action).unwrap();
        let ce2 = build_ce(&lie, &b, &action).unwrap();
        let id_b = GradedMap::identity(&b.alg);
        let eye: Vec<Vec<Rat>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { rat_int(1) } else { rat_int(0) })
                    .collect()
            })
            .collect();
        let m = ce_map(&ce, &ce2, &id_b, &eye, &action, &action).unwrap();
        for g in ce.stacky.alg.gen_ids() {
            let name = ce.stacky.alg.info(g).name.clone();
            let img = m.on_gen(g).unwrap();
            assert_eq!(img, Element::gen_named(&ce2.stacky.alg, &name).unwrap());
        }

        // zero Lie map with identity on B: equivariance fails since the
        // action is nontrivial
        let zero: Vec<Vec<Rat>> = vec![vec![rat_int(0); 3]; 3];
        let err = ce_map(&ce, &ce2, &id_b, &zero, &action, &action).map(|_| ()).unwrap_err();
        assert!(matches!(err, CdgaError::Equivariance { .. }));
    }

    #[test]
    fn weight_module_over_a_point() {
        // G_m-weight module of weight n over Q: delta(s) = n theta s
        let lie = AbstractLie::abelian(1);
        let alg = Algebra::commutative("Q", vec![]);
        let b = ChainCdga {
            alg: alg.clone(),
            del: Derivation::zero("del", &alg, Bidegree::new(0, -1)),
            coaction: None,
        };
        let action = vec![Derivation::zero("t", &alg, Bidegree::ZERO)];
        let ce = build_ce(&lie, &b, &action).unwrap();
        let n = 5i64;
        let module = CeModule {
            name: "V".into(),
            basis: vec![("s".into(), 0)],
            del_v: vec![vec![]],
            rho_v: vec![vec![vec![(
                0,
                Element::scalar(&ce.stacky.alg, Scalar::from_int(n)),
            )]]],
        };
        let s: ModElem = vec![(0, Element::one(&ce.stacky.alg))];
        let ds = module.apply_delta(&ce, &s).unwrap();
        let theta = Element::gen(&ce.stacky.alg, ce.ghosts[0]);
        assert_eq!(ds, vec![(0, theta.scale(&Scalar::from_int(n)))]);
        assert!(module.compat_witness(&ce).unwrap().is_none());
        assert!(module.action_is_lie(&ce, &action).unwrap());
    }

    #[test]
    fn rank_one_module_recovers_algebra() {
        let (lie, b, action) = sl2_on_poly();
        let _ = lie;
        let ce = build_ce(&AbstractLie::sl2(), &b, &action).unwrap();
        let alg = &ce.stacky.alg;
        // V = B rank one with rho_V(t_a)(1) = 0; products then act through
        // the Leibniz rule, recovering the algebra differential
        let module = CeModule {
            name: "B".into(),
            basis: vec![("one".into(), 0)],
            del_v: vec![vec![]],
            rho_v: (0..3).map(|_| vec![vec![]]).collect(),
        };
        assert!(module.compat_witness(&ce).unwrap().is_none());
        let x = Element::gen_named(alg, "x").unwrap();
        let got = module.apply_delta(&ce, &vec![(0, x.clone())]).unwrap();
        let expect = ce.stacky.delta.apply(&x).unwrap();
        assert_eq!(got, vec![(0, expect)]);
    }

    #[test]
    fn broken_module_action_detected_both_ways() {
        let (lie, b, action) = sl2_on_poly();
        let ce = build_ce(&lie, &b, &action).unwrap();
        let alg = &ce.stacky.alg;
        // rank-1 module with rho_V(e) = 1, rho_V(h) = rho_V(f) = 0: not a
        // Lie action since [h,e] = 2e forces rho_V(e) = 0 here
        let module = CeModule {
            name: "broken".into(),
            basis: vec![("s".into(), 0)],
            del_v: vec![vec![]],
            rho_v: vec![
                vec![vec![(0, Element::one(alg))]],
                vec![vec![]],
                vec![vec![]],
            ],
        };
        assert!(!module.action_is_lie(&ce, &action).unwrap());
        assert!(module.compat_witness(&ce).unwrap().is_some());
        // zero module passes trivially
        let z = CeModule::zero("0", 3);
        assert!(z.compat_witness(&ce).unwrap().is_none());
        assert!(z.action_is_lie(&ce, &action).unwrap());
    }
}
