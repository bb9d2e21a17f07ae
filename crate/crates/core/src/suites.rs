//! The verification suites driven by the CLI and the acceptance tests.
//!
//! Each suite runs a family of exact checks against one or more instances
//! and returns a [`SuiteReport`] keyed by check name; a fixed seed makes
//! the randomized smoke checks reproducible.

use crate::algebra::Element;
use crate::ce::{coface, codegeneracy};
use crate::error::Result;
use crate::graph::{
    build_phase_space, catalog, gauge_moment, DirectedGraph, GaugeTheoryInstance,
};
use crate::grading::koszul_sign;
use crate::hopf::{GroupKind, Hopf};
use crate::quantize::Strategy;
use crate::report::SuiteReport;
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::symbol::GenId;
use std::sync::Arc;

/// Group choices exercised by the default verification run.
pub fn default_groups() -> Vec<GroupKind> {
    vec![GroupKind::Torus { rank: 1 }, GroupKind::Sl2]
}

/// Hopf suite: axioms and action-bracket identities for torus ranks 1-3
/// and SL2, on generators and 50 random products of length <= 3.
pub fn hopf_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("hopf");
    let kinds = vec![
        ("torus1", GroupKind::Torus { rank: 1 }),
        ("torus2", GroupKind::Torus { rank: 2 }),
        ("torus3", GroupKind::Torus { rank: 3 }),
        ("sl2", GroupKind::Sl2),
    ];
    for (label, kind) in kinds {
        let hopf = Hopf::new(kind.clone());
        report.check(format!("{}/axioms", label), || hopf_axioms(&hopf, seed));
        report.check(format!("{}/action-brackets", label), || {
            action_brackets(&hopf)
        });
        report.check(format!("{}/coactions", label), || coaction_laws(&hopf));
    }
    report
}

fn random_products(hopf: &Hopf, seed: u64, count: usize, max_len: usize) -> Vec<Element> {
    let mut rng = Rng::new(seed);
    let ids: Vec<GenId> = hopf.alg.gen_ids().collect();
    let mut out: Vec<Element> = ids.iter().map(|&g| Element::gen(&hopf.alg, g)).collect();
    if ids.is_empty() {
        return out;
    }
    for _ in 0..count {
        let mut fs = Vec::new();
        for _ in 0..(1 + rng.below(max_len)) {
            fs.push((*rng.pick(&ids), 1));
        }
        out.push(Element::from_factors(&hopf.alg, &fs, Scalar::one()).unwrap());
    }
    out
}

fn hopf_axioms(hopf: &Arc<Hopf>, seed: u64) -> Result<Option<String>> {
    for x in random_products(hopf, seed, 50, 3) {
        let d = hopf.comultiply(&x)?;
        let left = hopf.comultiply_slot(&d, 0)?;
        let right = hopf.comultiply_slot(&d, 1)?;
        if left != right {
            return Ok(Some(format!("coassociativity at {}", x)));
        }
        let l = d
            .contract_slot(0, |m| hopf.counit_monomial(m))
            .into_element()?;
        let r = d
            .contract_slot(1, |m| hopf.counit_monomial(m))
            .into_element()?;
        if l != x || r != x {
            return Ok(Some(format!("counit law at {}", x)));
        }
        let s_first = d.map_slot(0, |e| hopf.antipode(e))?;
        let m1 = s_first.merge_slots(0)?.into_element()?;
        if m1 != Element::scalar(&hopf.alg, hopf.counit(&x)) {
            return Ok(Some(format!("antipode law at {}", x)));
        }
        // S^2 = id for commutative Hopf algebras
        if hopf.antipode(&hopf.antipode(&x)?)? != x {
            return Ok(Some(format!("antipode involution at {}", x)));
        }
    }
    Ok(None)
}

fn action_brackets(hopf: &Arc<Hopf>) -> Result<Option<String>> {
    let lie = hopf.lie_data()?;
    for s in 0..lie.dim() {
        for t in 0..lie.dim() {
            let ls = lie.rho_l(s)?;
            let lt = lie.rho_l(t)?;
            let rs = lie.rho_r(s)?;
            let rt = lie.rho_r(t)?;
            for g in hopf.alg.gen_ids() {
                let mut bl = Element::zero(&hopf.alg);
                let mut br = Element::zero(&hopf.alg);
                for (c, v) in lie.bracket(s, t) {
                    bl = bl.add(&lie.rho_l(c)?.on_gen(g).scale_rat(&v))?;
                    br = br.add(&lie.rho_r(c)?.on_gen(g).scale_rat(&v))?;
                }
                if ls.commutator_on_gen(&lt, g)? != bl {
                    return Ok(Some(format!(
                        "[rho_L({}), rho_L({})] at {}",
                        lie.basis[s].name,
                        lie.basis[t].name,
                        hopf.alg.info(g).name
                    )));
                }
                if rs.commutator_on_gen(&rt, g)? != br {
                    return Ok(Some(format!(
                        "[rho_R({}), rho_R({})] at {}",
                        lie.basis[s].name,
                        lie.basis[t].name,
                        hopf.alg.info(g).name
                    )));
                }
                if !ls.commutator_on_gen(&rt, g)?.is_zero() {
                    return Ok(Some(format!(
                        "[rho_L({}), rho_R({})] at {}",
                        lie.basis[s].name,
                        lie.basis[t].name,
                        hopf.alg.info(g).name
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn coaction_laws(hopf: &Arc<Hopf>) -> Result<Option<String>> {
    let lie = hopf.lie_data()?;
    // counit law of the adjoint coaction and duality with the coadjoint
    for b in 0..lie.dim() {
        for (c, coeff) in lie.adjoint_coaction(b) {
            let e = hopf.counit(&coeff).eval_zero();
            let expect = if b == c {
                crate::scalar::rat_int(1)
            } else {
                crate::scalar::rat_int(0)
            };
            if e != expect {
                return Ok(Some(format!("adjoint counit at {}", lie.basis[b].name)));
            }
        }
        // induced Lie action reproduces the bracket
        for a in 0..lie.dim() {
            if lie.adjoint_lie_action(a, b) != lie.bracket(a, b) {
                return Ok(Some(format!(
                    "adjoint action vs bracket at ({}, {})",
                    lie.basis[a].name, lie.basis[b].name
                )));
            }
        }
    }
    // pairing equivariance sum_c D^a_c C^c_b = delta
    let n = lie.dim();
    for a in 0..n {
        for b in 0..n {
            let mut acc = Element::zero(&hopf.alg);
            for c in 0..n {
                acc = acc.add(&lie.coadjoint[a][c].mul(&lie.adjoint[c][b])?)?;
            }
            let expect = if a == b {
                Element::one(&hopf.alg)
            } else {
                Element::zero(&hopf.alg)
            };
            if acc != expect {
                return Ok(Some(format!("coadjoint/adjoint duality at ({}, {})", a, b)));
            }
        }
    }
    Ok(None)
}

/// Builds (and caches nothing beyond the call) an instance for a suite.
pub fn instance(graph: &DirectedGraph, group: &GroupKind, level: usize) -> Result<GaugeTheoryInstance> {
    build_phase_space(graph, group, level)
}

/// Resolution suite: square-zero and anticommutation identities, the
/// cosimplicial identities for all valid index pairs at n <= max_level,
/// and compatibility of every coface/codegeneracy with both
/// differentials, over the whole graph catalog and both groups.
pub fn resolution_suite(max_level: usize) -> SuiteReport {
    let mut report = SuiteReport::new("resolution");
    for (name, graph) in catalog() {
        for group in default_groups() {
            let label = format!("{}/{}", name, group_label(&group));
            report.check(format!("{}/levels", label), || {
                let inst = instance(&graph, &group, max_level)?;
                resolution_checks(&inst)
            });
        }
    }
    report
}

pub fn group_label(g: &GroupKind) -> String {
    match g {
        GroupKind::Torus { rank } => format!("torus{}", rank),
        GroupKind::Sl2 => "sl2".into(),
    }
}

pub fn resolution_checks(inst: &GaugeTheoryInstance) -> Result<Option<String>> {
    let phase = &inst.phase;
    let max = phase.max_level();
    // bicomplex identities on every level
    for level in &phase.levels {
        if let Some(w) = level.stacky.bicomplex_witness()? {
            return Ok(Some(format!("level {}: {}", level.n, w)));
        }
    }
    // cosimplicial identities
    for n in 0..max {
        let from = &phase.levels[n];
        let mid = &phase.levels[n + 1];
        // d^j d^i = d^i d^{j-1} for i < j (maps level n -> n+2)
        if n + 2 <= max {
            let to = &phase.levels[n + 2];
            for j in 0..=(n + 2) {
                for i in 0..j {
                    let lhs = coface(j, mid, to)?.compose(&coface(i, from, mid)?)?;
                    let rhs = coface(i, mid, to)?.compose(&coface(j - 1, from, mid)?)?;
                    if !lhs.equals(&rhs)? {
                        return Ok(Some(format!("d^{} d^{} != d^{} d^{} at n={}", j, i, i, j - 1, n)));
                    }
                }
            }
        }
        // s^j s^i = s^i s^{j+1} for i <= j (maps level n+2 -> n)
        if n + 2 <= max {
            let top = &phase.levels[n + 2];
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = codegeneracy(j, mid, from)?.compose(&codegeneracy(i, top, mid)?)?;
                    let rhs = codegeneracy(i, mid, from)?.compose(&codegeneracy(j + 1, top, mid)?)?;
                    if !lhs.equals(&rhs)? {
                        return Ok(Some(format!("s^{} s^{} != s^{} s^{} at n={}", j, i, i, j + 1, n)));
                    }
                }
            }
        }
        // mixed identities: s^j d^i (maps level n -> n)
        for j in 0..=n {
            for i in 0..=(n + 1) {
                let di = coface(i, from, mid)?;
                let sj = codegeneracy(j, mid, from)?;
                let lhs = sj.compose(&di)?;
                if i == j || i == j + 1 {
                    if !lhs.equals(&crate::derivation::GradedMap::identity(from.alg()))? {
                        return Ok(Some(format!("s^{} d^{} != id at n={}", j, i, n)));
                    }
                } else if i < j {
                    if n == 0 {
                        continue; // no level below 0
                    }
                    let lower = &phase.levels[n - 1];
                    let rhs = coface(i, lower, from)?.compose(&codegeneracy(j - 1, from, lower)?)?;
                    if !lhs.equals(&rhs)? {
                        return Ok(Some(format!("s^{} d^{} != d^{} s^{} at n={}", j, i, i, j - 1, n)));
                    }
                } else {
                    // i > j + 1
                    if n == 0 {
                        continue;
                    }
                    let lower = &phase.levels[n - 1];
                    let rhs = coface(i - 1, lower, from)?.compose(&codegeneracy(j, from, lower)?)?;
                    if !lhs.equals(&rhs)? {
                        return Ok(Some(format!("s^{} d^{} != d^{} s^{} at n={}", j, i, i - 1, j, n)));
                    }
                }
            }
        }
        // differential compatibility of all cofaces and codegeneracies
        for i in 0..=(n + 1) {
            let d = coface(i, from, mid)?;
            if let Some(g) = d.chain_compat_witness(&from.stacky.del, &mid.stacky.del)? {
                return Ok(Some(format!("d^{} vs del at {} (n={})", i, g, n)));
            }
            if let Some(g) = d.chain_compat_witness(&from.stacky.delta, &mid.stacky.delta)? {
                return Ok(Some(format!("d^{} vs delta at {} (n={})", i, g, n)));
            }
        }
        for i in 0..=n {
            let s = codegeneracy(i, mid, from)?;
            if let Some(g) = s.chain_compat_witness(&mid.stacky.del, &from.stacky.del)? {
                return Ok(Some(format!("s^{} vs del at {} (n={})", i, g, n)));
            }
            if let Some(g) = s.chain_compat_witness(&mid.stacky.delta, &from.stacky.delta)? {
                return Ok(Some(format!("s^{} vs delta at {} (n={})", i, g, n)));
            }
        }
    }
    // gauge moment map against the generic frame expansion
    let small_dim = inst.group.dim();
    for v in &inst.graph.vertices {
        for b in 0..small_dim {
            let direct = gauge_moment(inst, v, b)?;
            let a = phase
                .space
                .lie
                .basis
                .iter()
                .position(|x| x.tag == crate::symbol::Tag::Vertex(v.clone()) && x.index == b)
                .unwrap();
            let generic = phase
                .reduced
                .embed_frame_expansion(&phase.space.moment_map(a)?)?;
            if direct != generic {
                return Ok(Some(format!("gauge moment at {} basis {}", v, b)));
            }
        }
    }
    Ok(None)
}

/// Poisson suite over one instance: antisymmetry and the cochain-map
/// property on all generator pairs, Leibniz on random triples, Jacobi on
/// all generator triples, and bracket compatibility with all totalized
/// cofaces and codegeneracies.
pub fn poisson_checks(inst: &GaugeTheoryInstance, seed: u64) -> Result<Option<String>> {
    let phase = &inst.phase;
    for (n, bracket) in phase.brackets.iter().enumerate() {
        let level = &phase.levels[n];
        let alg = level.alg();
        let gens: Vec<GenId> = alg.gen_ids().collect();
        // antisymmetry on generator pairs
        for &x in &gens {
            for &y in &gens {
                let xy = bracket.on_gens(x, y);
                let yx = bracket.on_gens(y, x);
                let sign = koszul_sign(alg.info(x).bidegree, alg.info(y).bidegree) as i64;
                if xy != yx.scale(&Scalar::from_int(-sign)) {
                    return Ok(Some(format!(
                        "antisymmetry at ({}, {}) level {}",
                        alg.info(x).name,
                        alg.info(y).name,
                        n
                    )));
                }
            }
        }
        // cochain map on generator pairs
        for &x in &gens {
            for &y in &gens {
                let xe = Element::gen(alg, x);
                let ye = Element::gen(alg, y);
                let b = bracket.bracket(&xe, &ye)?;
                let lhs = level.stacky.total_apply(&b)?;
                let dx = level.stacky.total_apply(&xe)?;
                let dy = level.stacky.total_apply(&ye)?;
                let sign = if alg.info(x).bidegree.is_odd() { -1 } else { 1 };
                let rhs = bracket
                    .bracket(&dx, &ye)?
                    .add(&bracket.bracket(&xe, &dy)?.scale(&Scalar::from_int(sign)))?;
                if lhs != rhs {
                    return Ok(Some(format!(
                        "cochain map at ({}, {}) level {}",
                        alg.info(x).name,
                        alg.info(y).name,
                        n
                    )));
                }
            }
        }
        // Jacobi on generator triples (sufficient by the biderivation
        // property)
        for &x in &gens {
            for &y in &gens {
                for &z in &gens {
                    let (dx, dy, dz) = (
                        alg.info(x).bidegree,
                        alg.info(y).bidegree,
                        alg.info(z).bidegree,
                    );
                    let xe = Element::gen(alg, x);
                    let ye = Element::gen(alg, y);
                    let ze = Element::gen(alg, z);
                    let t1 = bracket
                        .bracket(&xe, &bracket.bracket(&ye, &ze)?)?
                        .scale(&Scalar::from_int(koszul_sign(dx, dz) as i64));
                    let t2 = bracket
                        .bracket(&ye, &bracket.bracket(&ze, &xe)?)?
                        .scale(&Scalar::from_int(koszul_sign(dy, dx) as i64));
                    let t3 = bracket
                        .bracket(&ze, &bracket.bracket(&xe, &ye)?)?
                        .scale(&Scalar::from_int(koszul_sign(dz, dy) as i64));
                    if !t1.add(&t2)?.add(&t3)?.is_zero() {
                        return Ok(Some(format!(
                            "jacobi at ({}, {}, {}) level {}",
                            alg.info(x).name,
                            alg.info(y).name,
                            alg.info(z).name,
                            n
                        )));
                    }
                }
            }
        }
        // Leibniz on random homogeneous triples
        let mut rng = Rng::new(seed ^ (n as u64));
        if !gens.is_empty() {
            for _ in 0..100 {
                let mk = |rng: &mut Rng| {
                    let mut fs = Vec::new();
                    for _ in 0..(1 + rng.below(2)) {
                        fs.push((*rng.pick(&gens), 1));
                    }
                    Element::from_factors(alg, &fs, Scalar::one()).unwrap()
                };
                let x = mk(&mut rng);
                let y = mk(&mut rng);
                let z = mk(&mut rng);
                let (Some(dx), Some(dy)) = (x.bidegree(), y.bidegree()) else {
                    continue;
                };
                let lhs = bracket.bracket(&x, &y.mul(&z)?)?;
                let rhs = bracket.bracket(&x, &y)?.mul(&z)?.add(
                    &y.mul(&bracket.bracket(&x, &z)?)?
                        .scale(&Scalar::from_int(koszul_sign(dx, dy) as i64)),
                )?;
                if lhs != rhs {
                    return Ok(Some(format!("leibniz at level {}", n)));
                }
            }
        }
        // lattice table at level 0, coded independently from the graph
        // incidence and the single-factor Hopf data:
        // {t_e, a_e'} = delta_ee' rho^L(t)(a)_e, {t_e, t'_e'} =
        // delta_ee' [t,t']_e, {t_v, theta_v'} = -delta_vv' <theta, t>
        if n == 0 {
            if let Some(w) = lattice_table_oracle(inst, bracket)? {
                return Ok(Some(w));
            }
        }
    }
    // simplicial compatibility: d^i{x,y}_{n-1} = {d^i x, d^i y}_n and the
    // codegeneracy analog, on all generator pairs
    for n in 1..=phase.max_level() {
        let from = &phase.levels[n - 1];
        let to = &phase.levels[n];
        let bfrom = &phase.brackets[n - 1];
        let bto = &phase.brackets[n];
        for i in 0..=n {
            let d = coface(i, from, to)?;
            for x in from.alg().gen_ids() {
                for y in from.alg().gen_ids() {
                    let lhs = d.apply(&bfrom.on_gens(x, y))?;
                    let rhs = bto.bracket(&d.on_gen(x)?, &d.on_gen(y)?)?;
                    if lhs != rhs {
                        return Ok(Some(format!(
                            "coface bracket compat d^{} at ({}, {}) n={}",
                            i,
                            from.alg().info(x).name,
                            from.alg().info(y).name,
                            n
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            let s = codegeneracy(i, to, from)?;
            for x in to.alg().gen_ids() {
                for y in to.alg().gen_ids() {
                    let lhs = s.apply(&bto.on_gens(x, y))?;
                    let rhs = bfrom.bracket(&s.on_gen(x)?, &s.on_gen(y)?)?;
                    if lhs != rhs {
                        return Ok(Some(format!(
                            "codegeneracy bracket compat s^{} at ({}, {}) n={}",
                            i,
                            to.alg().info(x).name,
                            to.alg().info(y).name,
                            n
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Independent lattice-bracket oracle for level 0 of a graph instance.
fn lattice_table_oracle(
    inst: &GaugeTheoryInstance,
    bracket: &crate::poisson::PoissonBracket,
) -> Result<Option<String>> {
    use crate::poisson::GenRole;
    use crate::symbol::Tag;
    let phase = &inst.phase;
    let level = &phase.levels[0];
    let alg = level.alg();
    let space = &phase.space;
    let small = crate::hopf::Hopf::new(inst.group.clone());
    let small_lie = small.lie_data()?;
    let reduced = &phase.reduced;

    let frame_tag = |i: usize| space.frame[i].tag.clone();
    let frame_basis = |i: usize| space.frame[i].index as usize;
    let momentum_gen = |edge: &Tag, b: usize| {
        let i = space
            .frame
            .iter()
            .position(|f| &f.tag == edge && f.index as usize == b)
            .unwrap();
        level.b_gens[&reduced.momentum_gens[i]]
    };

    let gens: Vec<GenId> = alg.gen_ids().collect();
    for &x in &gens {
        for &y in &gens {
            let got = bracket.on_gens(x, y);
            let expect: Option<Element> = match (bracket.role(x), bracket.role(y)) {
                (GenRole::Momentum(i), GenRole::Coord(ag)) => {
                    let coord_info = space.coords.alg.info(*ag);
                    if frame_tag(*i) != coord_info.key.tag {
                        Some(Element::zero(alg))
                    } else {
                        // rho^L(t_b)(g) on the shared edge copy
                        let small_g = small
                            .alg
                            .gen_ids()
                            .find(|&g| small.alg.info(g).key.index == coord_info.key.index)
                            .unwrap();
                        let v = small_lie.rho_l(frame_basis(*i))?.on_gen(small_g);
                        let mut acc = Element::zero(alg);
                        for (m, c) in v.terms() {
                            let fs: Vec<(GenId, i32)> = m
                                .0
                                .iter()
                                .map(|&(g, k)| {
                                    let name = format!(
                                        "{}{}",
                                        small.alg.info(g).name,
                                        frame_tag(*i).suffix()
                                    );
                                    (alg.by_name(&name).unwrap(), k)
                                })
                                .collect();
                            acc = acc.add(&Element::from_factors(alg, &fs, c.clone())?)?;
                        }
                        Some(acc)
                    }
                }
                (GenRole::Momentum(i), GenRole::Momentum(j)) => {
                    if frame_tag(*i) != frame_tag(*j) {
                        Some(Element::zero(alg))
                    } else {
                        let mut acc = Element::zero(alg);
                        for (c, v) in small_lie.bracket(frame_basis(*i), frame_basis(*j)) {
                            acc = acc.add(
                                &Element::gen(alg, momentum_gen(&frame_tag(*i), c))
                                    .scale_rat(&v),
                            )?;
                        }
                        Some(acc)
                    }
                }
                (GenRole::Antighost(a), GenRole::Ghost { slot: 0, basis: b }) => {
                    let ta = &space.lie.basis[*a];
                    let tb = &space.lie.basis[*b];
                    if ta.tag != tb.tag {
                        Some(Element::zero(alg))
                    } else {
                        let p = small_lie.pairing(tb.index, ta.index);
                        Some(Element::scalar(alg, Scalar::from_rat(-p)))
                    }
                }
                (GenRole::Coord(_), GenRole::Coord(_))
                | (GenRole::Coord(_), GenRole::HopfSlot(_))
                | (GenRole::HopfSlot(_), _)
                | (GenRole::Antighost(_), GenRole::Antighost(_))
                | (GenRole::Ghost { .. }, GenRole::Ghost { .. })
                | (GenRole::Antighost(_), GenRole::Coord(_))
                | (GenRole::Coord(_), GenRole::Antighost(_))
                | (GenRole::Momentum(_), GenRole::Antighost(_))
                | (GenRole::Antighost(_), GenRole::Momentum(_)) => Some(Element::zero(alg)),
                _ => None, // antisymmetric partners; skip
            };
            if let Some(expect) = expect {
                if got != expect {
                    return Ok(Some(format!(
                        "lattice table at ({}, {}): got {}, expected {}",
                        alg.info(x).name,
                        alg.info(y).name,
                        got,
                        expect
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Quantization suite over one instance.
pub fn quantize_checks(inst: &GaugeTheoryInstance, seed: u64) -> Result<Option<String>> {
    let phase = &inst.phase;
    for (n, q) in phase.qlevels.iter().enumerate() {
        let alg = &q.alg;
        let gens: Vec<GenId> = alg.gen_ids().collect();
        // dhbar squares to zero on generators
        if let Some(g) = q.dhbar_square_witness()? {
            return Ok(Some(format!("dhbar^2 at {} level {}", g, n)));
        }
        // commutator table agrees with the independently coded relations
        for &x in &gens {
            for &y in &gens {
                let xe = Element::gen(alg, x);
                let ye = Element::gen(alg, y);
                let comm = q.commutator(&xe, &ye)?;
                let classical = phase.brackets[n].on_gens(
                    GenId(x.0), // same index layout as the classical level
                    GenId(y.0),
                );
                let expect = q.hat(&classical)?.scale(&Scalar::hbar());
                if comm != expect {
                    return Ok(Some(format!(
                        "commutation relation at ({}, {}) level {}",
                        alg.info(x).name,
                        alg.info(y).name,
                        n
                    )));
                }
            }
        }
        // correspondence principle: classical_limit([x,y]/hbar) = {x,y}
        for &x in &gens {
            for &y in &gens {
                let xe = Element::gen(alg, x);
                let ye = Element::gen(alg, y);
                let comm = q.commutator(&xe, &ye)?;
                let lhs = q.classical_limit(&q.div_hbar(&comm)?)?;
                let rhs = phase.brackets[n].on_gens(GenId(x.0), GenId(y.0));
                if lhs != rhs {
                    return Ok(Some(format!(
                        "correspondence principle at ({}, {}) level {}",
                        alg.info(x).name,
                        alg.info(y).name,
                        n
                    )));
                }
            }
        }
        // confluence: random words under both strategies
        let mut rng = Rng::new(seed ^ (n as u64));
        if !gens.is_empty() {
            for _ in 0..100 {
                let len = 1 + rng.below(6);
                let word: Vec<GenId> = (0..len).map(|_| *rng.pick(&gens)).collect();
                let a = q.word_normal_form(&word, Strategy::LeftmostInnermost)?;
                let b = q.word_normal_form(&word, Strategy::RightmostOutermost)?;
                if a != b {
                    return Ok(Some(format!("confluence at level {}", n)));
                }
                // idempotence of the normal form
                if q.nc_normal_form(&a)? != a {
                    return Ok(Some(format!("normal form not idempotent at level {}", n)));
                }
            }
        }
        // commutator-definition oracle for dhbar on random words
        let mut rng2 = Rng::new(seed.wrapping_mul(31) ^ (n as u64));
        let module_gens: Vec<GenId> = phase.levels[n]
            .alg()
            .gen_ids()
            .filter(|&g| {
                use crate::symbol::Block;
                matches!(
                    phase.levels[n].alg().info(g).key.block,
                    Block::Ghost | Block::Coord | Block::HopfSlot
                )
            })
            .collect();
        if !gens.is_empty() && !module_gens.is_empty() {
            for _ in 0..50 {
                let len = 1 + rng2.below(4);
                let word: Vec<GenId> = (0..len).map(|_| *rng2.pick(&gens)).collect();
                let nf = q.word_normal_form(&word, Strategy::LeftmostInnermost)?;
                // one structured sample element per word
                let mut fs = Vec::new();
                for _ in 0..(1 + rng2.below(3)) {
                    fs.push((*rng2.pick(&module_gens), 1));
                }
                let sample =
                    Element::from_factors(phase.levels[n].alg(), &fs, Scalar::one())?;
                for (m, _) in nf.terms() {
                    if !q.commutator_oracle(m, &sample)? {
                        return Ok(Some(format!("commutator oracle at level {}", n)));
                    }
                }
            }
        }
    }
    // quantized cosimplicial maps: relations, dhbar, classical limits
    for n in 1..=phase.max_level() {
        let from = &phase.qlevels[n - 1];
        let to = &phase.qlevels[n];
        for i in 0..=n {
            let d = from.coface(i, to)?;
            if let Some(w) = d.respects_relations(from, to)? {
                return Ok(Some(format!("quantized d^{} relations at {} (n={})", i, w, n)));
            }
            if let Some(w) = d.respects_dhbar(from, to)? {
                return Ok(Some(format!("quantized d^{} dhbar at {} (n={})", i, w, n)));
            }
            // classical limit of the quantized map equals the classical map
            for g in from.alg.gen_ids() {
                let lhs = to.classical_limit(&d.on_gen(g))?;
                let rhs = d.classical.on_gen(g)?;
                if lhs != rhs {
                    return Ok(Some(format!(
                        "classical limit of quantized d^{} at {} (n={})",
                        i,
                        from.alg.info(g).name,
                        n
                    )));
                }
            }
        }
        for i in 0..n {
            let s = to.codegeneracy(i, from)?;
            if let Some(w) = s.respects_relations(to, from)? {
                return Ok(Some(format!("quantized s^{} relations at {} (n={})", i, w, n)));
            }
            if let Some(w) = s.respects_dhbar(to, from)? {
                return Ok(Some(format!("quantized s^{} dhbar at {} (n={})", i, w, n)));
            }
        }
        // s^0 d^0 = id on generators
        let d0 = from.coface(0, to)?;
        let s0 = to.codegeneracy(0, from)?;
        for g in from.alg.gen_ids() {
            let img = s0.apply(to, from, &d0.on_gen(g))?;
            if img != Element::gen(&from.alg, g) {
                return Ok(Some(format!(
                    "s^0 d^0 != id at {} (n={})",
                    from.alg.info(g).name,
                    n
                )));
            }
        }
    }
    Ok(None)
}

/// CE suite: the sl2-on-polynomials worked case plus square-zero of the
/// cochain differential for every catalog instance at level 0.
pub fn ce_suite() -> SuiteReport {
    let mut report = SuiteReport::new("ce");
    report.check("sl2-on-polynomials", || {
        use crate::ce::{build_ce, AbstractLie, ChainCdga};
        use crate::derivation::Derivation;
        use crate::grading::Bidegree;
        use crate::symbol::{Block, GenInfo, GenKey};
        use std::collections::HashMap;
        let alg = crate::algebra::Algebra::commutative(
            "Q[x,y]",
            vec![
                GenInfo::new("x", GenKey::plain(Block::Coord, 0), Bidegree::ZERO),
                GenInfo::new("y", GenKey::plain(Block::Coord, 1), Bidegree::ZERO),
            ],
        );
        let b = ChainCdga {
            alg: alg.clone(),
            del: Derivation::zero("del", &alg, Bidegree::new(0, -1)),
            coaction: None,
        };
        let x = alg.by_name("x").unwrap();
        let y = alg.by_name("y").unwrap();
        let xe = Element::gen(&alg, x);
        let ye = Element::gen(&alg, y);
        let mk = |name: &str, tx: Element, ty: Element| {
            let mut t = HashMap::new();
            if !tx.is_zero() {
                t.insert(x, tx);
            }
            if !ty.is_zero() {
                t.insert(y, ty);
            }
            Derivation::new(name, &alg, Bidegree::ZERO, t)
        };
        let action = vec![
            mk("e", Element::zero(&alg), xe.clone()),
            mk("h", xe.clone(), ye.neg()),
            mk("f", ye.clone(), Element::zero(&alg)),
        ];
        let ce = build_ce(&AbstractLie::sl2(), &b, &action)?;
        Ok(ce.stacky.bicomplex_witness()?)
    });
    for (name, graph) in catalog() {
        for group in default_groups() {
            let label = format!("{}/{}", name, group_label(&group));
            report.check(format!("{}/square-zero", label), || {
                let inst = instance(&graph, &group, 0)?;
                Ok(inst.phase.levels[0].stacky.bicomplex_witness()?)
            });
        }
    }
    report
}

/// Poisson suite over representative instances.
pub fn poisson_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("poisson");
    let shapes: Vec<(&str, DirectedGraph)> = catalog()
        .into_iter()
        .filter(|(n, _)| ["edge", "loop", "two-cycle", "triangle"].contains(n))
        .collect();
    for (name, graph) in shapes {
        for group in default_groups() {
            // full level-2 towers for abundant instances are covered by the
            // torus; SL2 runs the smaller shapes at level 2 as well but the
            // triangle at level 1 to keep the suite under its budget
            let max = if group == GroupKind::Sl2 && name == "triangle" { 1 } else { 2 };
            let label = format!("{}/{}", name, group_label(&group));
            report.check(format!("{}/bracket-axioms", label), || {
                let inst = instance(&graph, &group, max)?;
                poisson_checks(&inst, seed)
            });
        }
    }
    report
}

/// Quantization suite over representative instances.
pub fn quantize_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("quantize");
    let shapes: Vec<(&str, DirectedGraph)> = catalog()
        .into_iter()
        .filter(|(n, _)| ["edge", "loop", "two-cycle"].contains(n))
        .collect();
    for (name, graph) in shapes {
        for group in default_groups() {
            let label = format!("{}/{}", name, group_label(&group));
            report.check(format!("{}/quantization", label), || {
                let inst = instance(&graph, &group, 2)?;
                quantize_checks(&inst, seed)
            });
        }
    }
    report
}

/// The one-dimensional-torus worked example: weight objects over a point,
/// their validation, the Gauss identity `del psi + psi del = hbar n id`,
/// and endomorphism homology with a rank-nullity cross-check.
pub fn gm_example_suite(weights: &[i64], seed: u64) -> SuiteReport {
    use crate::quantize::{
        endo_complex_point, endo_homology_point, point_weight_triple, validate_triple,
        velem_basis,
    };
    let mut report = SuiteReport::new("gm-example");
    let point = DirectedGraph::new(&["v1"], &[]).expect("point graph");
    let inst = match instance(&point, &GroupKind::Torus { rank: 1 }, 0) {
        Ok(i) => i,
        Err(e) => {
            report.check("build", move || Ok(Some(format!("{}", e))));
            return report;
        }
    };
    for &n in weights {
        report.check(format!("weight{}/triple", n), || {
            let t = point_weight_triple(&inst.phase, n)?;
            let r = validate_triple(&t)?;
            Ok(if r.passed() {
                None
            } else {
                Some(format!("{:?}", r.checks.iter().find(|c| !c.pass)))
            })
        });
        report.check(format!("weight{}/gauss-exact", n), || {
            // del psi + psi del = hbar n id on both basis vectors
            let t = point_weight_triple(&inst.phase, n)?;
            for k in 0..t.basis.len() {
                let s = velem_basis(k);
                let mut lhs = t.apply_del(&t.apply_psi(0, &s)?)?;
                for (key, c) in t.apply_psi(0, &t.apply_del(&s)?)? {
                    crate::algebra::merge_term(&mut lhs, key, c);
                }
                let expect: crate::quantize::VElem = velem_basis(k)
                    .into_iter()
                    .map(|(key, c)| {
                        (key, c.mul(&Scalar::hbar_pow(crate::scalar::rat_int(n), 1)))
                    })
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                if lhs != expect {
                    return Ok(Some(format!("defect on {}", t.basis[k].key)));
                }
            }
            Ok(None)
        });
        report.check(format!("weight{}/homology", n), || {
            let t = point_weight_triple(&inst.phase, n)?;
            let hom = endo_homology_point(&t)?;
            if n == 0 {
                let ok = hom.len() == 2
                    && hom.iter().all(|h| h.free_rank == 1 && h.torsion.is_empty());
                Ok(if ok { None } else { Some(format!("{:?}", hom)) })
            } else {
                let torsion: Vec<_> = hom.iter().filter(|h| !h.torsion.is_empty()).collect();
                let ok = torsion.len() == 1
                    && torsion[0].torsion == vec![Scalar::hbar()]
                    && hom.iter().all(|h| h.free_rank == 0);
                Ok(if ok { None } else { Some(format!("{:?}", hom)) })
            }
        });
        report.check(format!("weight{}/rank-nullity", n), || {
            let t = point_weight_triple(&inst.phase, n)?;
            let complex = endo_complex_point(&t)?;
            Ok(complex.check_against_rank_nullity(seed, 5).err())
        });
    }
    report
}

/// Pointing objects for every catalog graph with at most 2 vertices and 2
/// edges, both groups, at the given momentum bound.
pub fn pointing_suite(bound: usize) -> SuiteReport {
    use crate::quantize::{build_pointing, validate_triple};
    let mut report = SuiteReport::new("pointing");
    for (name, graph) in catalog() {
        if graph.vertices.len() > 2 || graph.edges.len() > 2 {
            continue;
        }
        for group in default_groups() {
            let label = format!("{}/{}", name, group_label(&group));
            report.check(format!("{}/triple", label), || {
                let inst = instance(&graph, &group, 0)?;
                let pointing = build_pointing(&inst.phase, bound)?;
                let r = validate_triple(&pointing)?;
                Ok(if r.passed() {
                    None
                } else {
                    Some(format!("{:?}", r.checks.iter().find(|c| !c.pass)))
                })
            });
        }
    }
    report
}

/// Prefactorization suite: empty-tuple, inclusion, permutation
/// equivariance, and three-deep composition coherence.
pub fn prefactorization_suite() -> SuiteReport {
    use crate::graph::{
        induce_object, triples_equal, GraphMorphism, OrthogonalTuple,
    };
    use crate::quantize::{build_pointing, point_weight_triple, validate_triple};
    let mut report = SuiteReport::new("prefactorization");
    let torus = GroupKind::Torus { rank: 1 };

    report.check("empty-tuple-is-pointing", || {
        for group in default_groups() {
            let u = DirectedGraph::new(&["v1", "v2"], &[("e1", "v1", "v2")])?;
            let inst = instance(&u, &group, 0)?;
            let tuple = OrthogonalTuple {
                target: u.clone(),
                parts: vec![],
            };
            let induced = induce_object(&inst, &tuple, &[], &[], 2)?;
            let pointing = build_pointing(&inst.phase, 2)?;
            if !triples_equal(&induced, &pointing) {
                return Ok(Some(format!("{}", group_label(&group))));
            }
        }
        Ok(None)
    });

    report.check("permutation-equivariance", || {
        let p1 = DirectedGraph::new(&["w1"], &[])?;
        let p2 = DirectedGraph::new(&["w2"], &[])?;
        let tgt = DirectedGraph::new(&["w1", "w2"], &[])?;
        let i1 = instance(&p1, &torus, 0)?;
        let i2 = instance(&p2, &torus, 0)?;
        let it = instance(&tgt, &torus, 0)?;
        let o1 = point_weight_triple(&i1.phase, 2)?;
        let o2 = point_weight_triple(&i2.phase, 5)?;
        let f1 = GraphMorphism::inclusion(&p1);
        let f2 = GraphMorphism::inclusion(&p2);
        let t12 = OrthogonalTuple {
            target: tgt.clone(),
            parts: vec![(p1.clone(), f1.clone()), (p2.clone(), f2.clone())],
        };
        let t21 = OrthogonalTuple {
            target: tgt.clone(),
            parts: vec![(p2.clone(), f2), (p1.clone(), f1)],
        };
        let a = induce_object(&it, &t12, &[&i1, &i2], &[&o1, &o2], 1)?;
        let b = induce_object(&it, &t21, &[&i2, &i1], &[&o2, &o1], 1)?;
        Ok(if triples_equal(&a, &b) { None } else { Some("objects differ".into()) })
    });

    report.check("three-deep-composition", || {
        let pt = DirectedGraph::new(&["w1"], &[])?;
        let edge_g = DirectedGraph::new(&["v1", "v2"], &[("e1", "v1", "v2")])?;
        let mid = DirectedGraph::new(&["w1", "v1", "v2"], &[("e1", "v1", "v2")])?;
        let big = DirectedGraph::new(
            &["w1", "v1", "v2", "u1"],
            &[("e1", "v1", "v2"), ("e2", "u1", "u1")],
        )?;
        let inst_pt = instance(&pt, &torus, 0)?;
        let inst_edge = instance(&edge_g, &torus, 0)?;
        let inst_mid = instance(&mid, &torus, 0)?;
        let inst_big = instance(&big, &torus, 0)?;
        let w = point_weight_triple(&inst_pt.phase, 3)?;
        let p_edge = build_pointing(&inst_edge.phase, 1)?;
        let f_pt = GraphMorphism::inclusion(&pt);
        let f_edge = GraphMorphism::inclusion(&edge_g);
        let tuple_mid = OrthogonalTuple {
            target: mid.clone(),
            parts: vec![(pt.clone(), f_pt.clone()), (edge_g.clone(), f_edge.clone())],
        };
        let obj_mid =
            induce_object(&inst_mid, &tuple_mid, &[&inst_pt, &inst_edge], &[&w, &p_edge], 1)?;
        let g_mid = GraphMorphism::inclusion(&mid);
        let tuple_big = OrthogonalTuple {
            target: big.clone(),
            parts: vec![(mid.clone(), g_mid.clone())],
        };
        let nested = induce_object(&inst_big, &tuple_big, &[&inst_mid], &[&obj_mid], 1)?;
        let tuple_direct = OrthogonalTuple {
            target: big.clone(),
            parts: vec![
                (pt.clone(), g_mid.compose(&f_pt)?),
                (edge_g.clone(), g_mid.compose(&f_edge)?),
            ],
        };
        let direct = induce_object(
            &inst_big,
            &tuple_direct,
            &[&inst_pt, &inst_edge],
            &[&w, &p_edge],
            1,
        )?;
        if !triples_equal(&nested, &direct) {
            return Ok(Some("nested != direct".into()));
        }
        let r = validate_triple(&direct)?;
        Ok(if r.passed() { None } else { Some("induced object invalid".into()) })
    });

    report
}
