//! Quantized module triples `(V, nabla, Psi)` over a phase space: finite
//! free graded `A[hbar]`-modules with gauge coaction, a flat connection for
//! `hbar d` along the tangent frame, and an antighost action implementing
//! the quantum Gauss constraint
//! `del Psi_t + Psi_t del = nabla_{mu(t)} + hbar rho_V(t)`.
//!
//! `validate_triple` checks every axiom exactly on the stored basis (up to
//! the declared check bound for truncated objects) and reports a witness
//! per failed condition. `build_pointing` realizes the distinguished
//! rank-one object: its basis is the normal-order block of momentum words
//! tensor antighost words inside the level-0 quantized algebra, with the
//! closed-formula differential
//! `del(D x t_1...t_n) = sum_i (-1)^{i-1} (D mu(t_i) x ...t_i^... +
//! D x [t_1...t_{i-1}, theta^b] rho(t_b)(t_i) ... )`;
//! left multiplication gives the connection and the antighost action.
//! The momentum-degree truncation is consistent because `del` preserves
//! the total word-length filtration; two extra lengths of headroom are
//! stored so that composite identities evaluate exactly on the checked
//! region.

use crate::algebra::{merge_term, Element, Monomial};
use crate::error::{CdgaError, Result};
use crate::homology::{kernel_basis, solve, FreeComplex, HomologySummary, PolyMatrix};
use crate::hopf::lie_eval_element;
use crate::phase::Phase;
use crate::quantize::QuantizedLevel;
use crate::scalar::{Rat, Scalar};
use crate::symbol::{Block, GenId, Tag};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// One tensor factor of a basis vector, keyed by graph locality so that
/// equivalent constructions produce identical keys after sorting.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Atom {
    Momentum { edge: String, idx: u32, exp: u32 },
    Antighost { vertex: String, idx: u32 },
    /// Private basis letter of an imported object, anchored at a vertex or
    /// edge (relabeled by pushforwards); `odd` records the total-degree
    /// parity for the Koszul orientation of canonical sorting.
    Slot { place: String, name: String, odd: bool },
}

impl Atom {
    pub fn is_odd(&self) -> bool {
        match self {
            Atom::Momentum { .. } => false,
            Atom::Antighost { .. } => true,
            Atom::Slot { odd, .. } => *odd,
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct BasisKey(pub Vec<Atom>);

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for a in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match a {
                Atom::Momentum { edge, idx, exp } => {
                    write!(f, "p{}_{}", idx, edge)?;
                    if *exp != 1 {
                        write!(f, "^{}", exp)?;
                    }
                }
                Atom::Antighost { vertex, idx } => write!(f, "t{}_{}", idx, vertex)?,
                Atom::Slot { place, name, .. } => write!(f, "{}@{}", name, place)?,
            }
        }
        Ok(())
    }
}

/// One basis vector of the module.
#[derive(Clone, Debug)]
pub struct Basis {
    pub key: BasisKey,
    pub chain_degree: i32,
}

/// A module element: finite sum of `coeff * s_k` with coefficients given
/// by a coordinate monomial (in `A`) and a `Q[hbar]` scalar.
pub type VElem = BTreeMap<(usize, Monomial), Scalar>;

pub fn velem_zero() -> VElem {
    BTreeMap::new()
}

pub fn velem_basis(k: usize) -> VElem {
    let mut v = BTreeMap::new();
    v.insert((k, Monomial::unit()), Scalar::one());
    v
}

fn velem_add(acc: &mut VElem, other: VElem) {
    for (k, c) in other {
        merge_term(acc, k, c);
    }
}

fn velem_scale(x: &VElem, c: &Scalar) -> VElem {
    if c.is_zero() {
        return velem_zero();
    }
    x.iter().map(|(k, s)| (k.clone(), s.mul(c))).collect()
}

fn velem_neg(x: &VElem) -> VElem {
    x.iter().map(|(k, s)| (k.clone(), -s.clone())).collect()
}

fn velem_sub(a: &VElem, b: &VElem) -> VElem {
    let mut out = a.clone();
    velem_add(&mut out, velem_neg(b));
    out
}

/// Tensor `V x H` elements, for coaction checks.
pub type VTensor = BTreeMap<((usize, Monomial), Monomial), Scalar>;

/// The quantized module triple.
pub struct PerTriple {
    pub name: String,
    pub phase: Arc<Phase>,
    pub basis: Vec<Basis>,
    /// Number of leading basis vectors on which the axioms are asserted;
    /// truncated objects store extra headroom so composite identities
    /// evaluate exactly.
    pub check_upto: usize,
    pub del: Vec<VElem>,
    /// Connection components per frame index.
    pub nabla: Vec<Vec<VElem>>,
    /// Antighost action per Lie basis index.
    pub psi: Vec<Vec<VElem>>,
    /// Coaction on basis vectors: constant `V`-legs with gauge-Hopf
    /// coefficients.
    pub coaction: Vec<Vec<(usize, Element)>>,
    frame_acts: Vec<crate::derivation::Derivation>,
    coact: crate::ce::Coaction,
}

impl PerTriple {
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        name: String,
        phase: Arc<Phase>,
        basis: Vec<Basis>,
        check_upto: usize,
        del: Vec<VElem>,
        nabla: Vec<Vec<VElem>>,
        psi: Vec<Vec<VElem>>,
        coaction: Vec<Vec<(usize, Element)>>,
    ) -> Self {
        let space = &phase.space;
        let frame_acts = space
            .frame
            .iter()
            .map(|f| {
                crate::derivation::Derivation::new(
                    f.name.clone(),
                    &space.coords.alg,
                    crate::grading::Bidegree::ZERO,
                    f.action.clone(),
                )
            })
            .collect();
        let coact = crate::ce::Coaction {
            hopf: space.gauge.clone(),
            table: space.coord_coaction.clone(),
        };
        PerTriple {
            name,
            phase,
            basis,
            check_upto,
            del,
            nabla,
            psi,
            coaction,
            frame_acts,
            coact,
        }
    }

    pub fn coords_alg(&self) -> &Arc<crate::algebra::Algebra> {
        &self.phase.space.coords.alg
    }

    /// Multiplication by a coordinate element (the `A[hbar]`-module
    /// structure): coefficients multiply in `A`.
    pub fn coord_mul(&self, a: &Element, x: &VElem) -> Result<VElem> {
        let alg = self.coords_alg();
        let mut out = velem_zero();
        for ((k, m), c) in x {
            let me = Element::from_monomial(alg, m.clone(), c.clone());
            let p = a.mul(&me)?;
            for (m2, c2) in p.terms() {
                merge_term(&mut out, (*k, m2.clone()), c2.clone());
            }
        }
        Ok(out)
    }

    /// Applies an `A`-linear table (the differential or an antighost
    /// component).
    fn apply_linear(&self, table: &[VElem], x: &VElem) -> Result<VElem> {
        let alg = self.coords_alg();
        let mut out = velem_zero();
        for ((k, m), c) in x {
            let a = Element::from_monomial(alg, m.clone(), c.clone());
            velem_add(&mut out, self.coord_mul(&a, &table[*k])?);
        }
        Ok(out)
    }

    pub fn apply_del(&self, x: &VElem) -> Result<VElem> {
        self.apply_linear(&self.del, x)
    }

    pub fn apply_psi(&self, a: usize, x: &VElem) -> Result<VElem> {
        self.apply_linear(&self.psi[a], x)
    }

    /// Covariant derivative along frame element `i`, with the Leibniz rule
    /// `nabla(a s) = hbar v_i(a) s + a nabla(s)`.
    pub fn apply_nabla(&self, i: usize, x: &VElem) -> Result<VElem> {
        let alg = self.coords_alg();
        let space = &self.phase.space;
        let _ = space;
        let mut out = velem_zero();
        for ((k, m), c) in x {
            let a = Element::from_monomial(alg, m.clone(), c.clone());
            let va = self.frame_acts[i].apply(&a)?.scale(&Scalar::hbar());
            for (m2, c2) in va.terms() {
                merge_term(&mut out, (*k, m2.clone()), c2.clone());
            }
            velem_add(&mut out, self.coord_mul(&a, &self.nabla[i][*k])?);
        }
        Ok(out)
    }

    /// `nabla` along an `A`-coefficient frame expansion (a moment map
    /// image): coefficients multiply after differentiation.
    pub fn apply_nabla_expansion(&self, coeffs: &[(usize, Element)], x: &VElem) -> Result<VElem> {
        let mut out = velem_zero();
        for (i, c) in coeffs {
            velem_add(&mut out, self.coord_mul(c, &self.apply_nabla(*i, x)?)?);
        }
        Ok(out)
    }

    /// Coaction extended to module elements via the coordinate coaction.
    pub fn coaction_apply(&self, x: &VElem) -> Result<VTensor> {
        let alg = self.coords_alg();
        let space = &self.phase.space;
        let mut out: VTensor = BTreeMap::new();
        for ((k, m), c) in x {
            let rho_a = self.coact.on_monomial(alg, m)?;
            for (ms, ca) in &rho_a.terms {
                for (j, h) in &self.coaction[*k] {
                    let h_full =
                        Element::from_monomial(&space.gauge.alg, ms[1].clone(), ca.mul(c))
                            .mul(h)?;
                    for (hm, hc) in h_full.terms() {
                        merge_term(&mut out, ((*j, ms[0].clone()), hm.clone()), hc.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Induced Lie action of an antighost basis element via the coaction.
    pub fn rho_lie(&self, a: usize, x: &VElem) -> Result<VElem> {
        let space = &self.phase.space;
        let mut out = velem_zero();
        for (((k, m), hm), c) in self.coaction_apply(x)? {
            let h = Element::from_monomial(&space.gauge.alg, hm, Scalar::one());
            let v = lie_eval_element(&space.gauge, &space.lie.basis[a].values, &h);
            if !v.is_zero() {
                merge_term(&mut out, (k, m), c.mul(&v));
            }
        }
        Ok(out)
    }
}

/// Outcome of one validated condition.
#[derive(Clone, Debug)]
pub struct TripleCheck {
    pub condition: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct TripleReport {
    pub name: String,
    pub checks: Vec<TripleCheck>,
}

impl TripleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "object": self.name,
            "status": if self.passed() { "pass" } else { "fail" },
            "finite_free_criterion": "module is finite free over A[hbar]; cofibrancy and perfectness hold by the sufficient finite-free criterion",
            "conditions": self.checks.iter().map(|c| serde_json::json!({
                "condition": c.condition,
                "status": if c.pass { "pass" } else { "fail" },
                "witness": c.witness,
            })).collect::<Vec<_>>(),
        })
    }
}

fn velem_show(t: &PerTriple, x: &VElem) -> String {
    if x.is_empty() {
        return "0".into();
    }
    let alg = t.coords_alg();
    x.iter()
        .map(|((k, m), c)| {
            let coeff = Element::from_monomial(alg, m.clone(), c.clone());
            format!("({})*[{}]", coeff, t.basis[*k].key)
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Validates all triple axioms on the stored basis (first `check_upto`
/// vectors for composite identities, everything for `del^2`).
pub fn validate_triple(t: &PerTriple) -> Result<TripleReport> {
    validate_triple_timed(t, false)
}

pub fn validate_triple_timed(t: &PerTriple, timed: bool) -> Result<TripleReport> {
    let phase = &t.phase;
    let space = &phase.space;
    let lie = &space.lie;
    let nframe = space.frame.len();
    let dim = lie.dim();
    let mut checks = Vec::new();
    let upto = t.check_upto.min(t.basis.len());

    let mut last = std::time::Instant::now();
    let mut push = |condition: &str, witness: Option<String>| {
        if timed {
            eprintln!("  {}: {:?}", condition, last.elapsed());
            last = std::time::Instant::now();
        }
        checks.push(TripleCheck {
            condition: condition.into(),
            pass: witness.is_none(),
            witness,
        });
    };

    // del^2 = 0 on every stored basis vector (del preserves the stored
    // filtration by construction)
    {
        let mut w = None;
        for k in 0..t.basis.len() {
            let d2 = t.apply_del(&t.apply_del(&velem_basis(k))?)?;
            if !d2.is_empty() {
                w = Some(format!(
                    "del^2({}) = {}",
                    t.basis[k].key,
                    velem_show(t, &d2)
                ));
                break;
            }
        }
        push("del-square-zero", w);
    }

    // coaction counit on basis vectors
    {
        let mut w = None;
        for k in 0..t.basis.len() {
            let mut collapsed = velem_zero();
            for (j, h) in &t.coaction[k] {
                let e = space.gauge.counit(h);
                merge_term(&mut collapsed, (*j, Monomial::unit()), e);
            }
            if collapsed != velem_basis(k) {
                w = Some(t.basis[k].key.to_string());
                break;
            }
        }
        push("coaction-counital", w);
    }
    // coaction coassociativity on the asserted basis vectors
    {
        let mut w = None;
        for k in 0..upto {
            let mut lhs: BTreeMap<(usize, Monomial, Monomial), Scalar> = BTreeMap::new();
            for (j, h) in &t.coaction[k] {
                for (l, h2) in &t.coaction[*j] {
                    for (m2, c2) in h2.terms() {
                        for (m1, c1) in h.terms() {
                            merge_term(&mut lhs, (*l, m2.clone(), m1.clone()), c1.mul(c2));
                        }
                    }
                }
            }
            let mut rhs: BTreeMap<(usize, Monomial, Monomial), Scalar> = BTreeMap::new();
            for (j, h) in &t.coaction[k] {
                let dd = space.gauge.comultiply(h)?;
                for (ms, c) in &dd.terms {
                    merge_term(&mut rhs, (*j, ms[0].clone(), ms[1].clone()), c.clone());
                }
            }
            if lhs != rhs {
                w = Some(t.basis[k].key.to_string());
                break;
            }
        }
        push("coaction-coassociative", w);
    }

    // (1h) module/coaction compatibility on coordinate generators x basis
    {
        let mut w = None;
        'outer: for g in space.coords.alg.gen_ids() {
            let a = Element::gen(&space.coords.alg, g);
            for k in 0..upto {
                let lhs = t.coaction_apply(&t.coord_mul(&a, &velem_basis(k))?)?;
                let rho_a = t.coact.apply(&a)?;
                let mut rhs: VTensor = BTreeMap::new();
                for (ms, ca) in &rho_a.terms {
                    for (j, h) in &t.coaction[k] {
                        let h_full =
                            Element::from_monomial(&space.gauge.alg, ms[1].clone(), ca.clone())
                                .mul(h)?;
                        for (hm, hc) in h_full.terms() {
                            merge_term(&mut rhs, ((*j, ms[0].clone()), hm.clone()), hc.clone());
                        }
                    }
                }
                if lhs != rhs {
                    w = Some(format!(
                        "{} . {}",
                        space.coords.alg.info(g).name,
                        t.basis[k].key
                    ));
                    break 'outer;
                }
            }
        }
        push("module-coaction-compat", w);
    }

    // (2h) nabla chain map: del nabla = nabla del on basis
    {
        let mut w = None;
        'outer: for i in 0..nframe {
            for k in 0..upto {
                let lhs = t.apply_del(&t.apply_nabla(i, &velem_basis(k))?)?;
                let rhs = t.apply_nabla(i, &t.apply_del(&velem_basis(k))?)?;
                if lhs != rhs {
                    w = Some(format!(
                        "[del, nabla_{}] on {}",
                        space.frame[i].name, t.basis[k].key
                    ));
                    break 'outer;
                }
            }
        }
        push("nabla-chain-map", w);
    }

    // del equivariance: rho(del s) = (del x id)(rho s)
    {
        let mut w = None;
        for k in 0..upto {
            let lhs = t.coaction_apply(&t.apply_del(&velem_basis(k))?)?;
            let mut rhs: VTensor = BTreeMap::new();
            for (j, h) in &t.coaction[k] {
                for ((l, m), c) in t.apply_del(&velem_basis(*j))? {
                    for (hm, hc) in h.terms() {
                        merge_term(&mut rhs, ((l, m.clone()), hm.clone()), c.mul(hc));
                    }
                }
            }
            if lhs != rhs {
                w = Some(t.basis[k].key.to_string());
                break;
            }
        }
        push("del-equivariant", w);
    }

    // nabla equivariance: rho(nabla_i s) = nabla_j(s_0) x c_ji s_1
    {
        let mut w = None;
        'outer: for i in 0..nframe {
            for k in 0..upto {
                let lhs = t.coaction_apply(&t.apply_nabla(i, &velem_basis(k))?)?;
                let mut rhs: VTensor = BTreeMap::new();
                for (j, cji) in &space.frame[i].coaction {
                    for (l, h) in &t.coaction[k] {
                        let coeff = cji.mul(h)?;
                        for ((l2, m), c) in t.apply_nabla(*j, &velem_basis(*l))? {
                            for (hm, hc) in coeff.terms() {
                                merge_term(&mut rhs, ((l2, m.clone()), hm.clone()), c.mul(hc));
                            }
                        }
                    }
                }
                if lhs != rhs {
                    w = Some(format!(
                        "nabla_{} on {}",
                        space.frame[i].name, t.basis[k].key
                    ));
                    break 'outer;
                }
            }
        }
        push("nabla-equivariant", w);
    }

    // psi equivariance with the adjoint coaction legs
    {
        let mut w = None;
        'outer: for a in 0..dim {
            for k in 0..upto {
                let lhs = t.coaction_apply(&t.apply_psi(a, &velem_basis(k))?)?;
                let mut rhs: VTensor = BTreeMap::new();
                for (c_idx, cca) in lie.adjoint_coaction(a) {
                    for (l, h) in &t.coaction[k] {
                        let coeff = cca.mul(h)?;
                        for ((l2, m), c) in t.apply_psi(c_idx, &velem_basis(*l))? {
                            for (hm, hc) in coeff.terms() {
                                merge_term(&mut rhs, ((l2, m.clone()), hm.clone()), c.mul(hc));
                            }
                        }
                    }
                }
                if lhs != rhs {
                    w = Some(format!("psi_{} on {}", lie.basis[a].name, t.basis[k].key));
                    break 'outer;
                }
            }
        }
        push("psi-equivariant", w);
    }

    // (ih) flatness: [nabla_i, nabla_j] = hbar nabla_{[v_i, v_j]}
    {
        let mut w = None;
        'outer: for i in 0..nframe {
            for j in 0..nframe {
                for k in 0..upto {
                    let s = velem_basis(k);
                    let ab = t.apply_nabla(i, &t.apply_nabla(j, &s)?)?;
                    let ba = t.apply_nabla(j, &t.apply_nabla(i, &s)?)?;
                    let mut lhs = velem_sub(&ab, &ba);
                    for (l, coeff) in space.frame_bracket(i, j) {
                        let term =
                            velem_scale(&t.apply_nabla(l, &s)?, &Scalar::hbar_pow(-coeff, 1));
                        velem_add(&mut lhs, term);
                    }
                    if !lhs.is_empty() {
                        w = Some(format!(
                            "[nabla_{}, nabla_{}] on {}",
                            space.frame[i].name, space.frame[j].name, t.basis[k].key
                        ));
                        break 'outer;
                    }
                }
            }
        }
        push("nabla-flat", w);
    }

    // (ih) [nabla, psi] = 0
    {
        let mut w = None;
        'outer: for i in 0..nframe {
            for a in 0..dim {
                for k in 0..upto {
                    let s = velem_basis(k);
                    let ab = t.apply_nabla(i, &t.apply_psi(a, &s)?)?;
                    let ba = t.apply_psi(a, &t.apply_nabla(i, &s)?)?;
                    if ab != ba {
                        w = Some(format!(
                            "[nabla_{}, psi_{}] on {}",
                            space.frame[i].name, lie.basis[a].name, t.basis[k].key
                        ));
                        break 'outer;
                    }
                }
            }
        }
        push("nabla-psi-commute", w);
    }
    // (ih) psi anticommutation
    {
        let mut w = None;
        'outer: for a in 0..dim {
            for b in 0..dim {
                for k in 0..upto {
                    let s = velem_basis(k);
                    let ab = t.apply_psi(a, &t.apply_psi(b, &s)?)?;
                    let ba = t.apply_psi(b, &t.apply_psi(a, &s)?)?;
                    let mut sum = ab;
                    velem_add(&mut sum, ba);
                    if !sum.is_empty() {
                        w = Some(format!(
                            "psi_{} psi_{} on {}",
                            lie.basis[a].name, lie.basis[b].name, t.basis[k].key
                        ));
                        break 'outer;
                    }
                }
            }
        }
        push("psi-anticommute", w);
    }

    // (iih) Gauss constraint:
    // del psi_t + psi_t del = nabla_{mu(t)} + hbar rho_V(t)
    {
        let mut w = None;
        'outer: for a in 0..dim {
            let mu = space.moment_map(a)?;
            for k in 0..upto {
                let s = velem_basis(k);
                let mut lhs = t.apply_del(&t.apply_psi(a, &s)?)?;
                velem_add(&mut lhs, t.apply_psi(a, &t.apply_del(&s)?)?);
                let mut rhs = t.apply_nabla_expansion(&mu, &s)?;
                velem_add(&mut rhs, velem_scale(&t.rho_lie(a, &s)?, &Scalar::hbar()));
                let defect = velem_sub(&lhs, &rhs);
                if !defect.is_empty() {
                    w = Some(format!(
                        "t_{} on {}: defect {}",
                        lie.basis[a].name,
                        t.basis[k].key,
                        velem_show(t, &defect)
                    ));
                    break 'outer;
                }
            }
        }
        push("gauss-constraint", w);
    }

    Ok(TripleReport {
        name: t.name.clone(),
        checks,
    })
}

/// A graded module map between triples, given on basis vectors.
pub struct Morphism {
    pub total_degree: i32,
    pub table: Vec<VElem>,
}

#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub checks: Vec<TripleCheck>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "status": if self.passed() { "pass" } else { "fail" },
            "conditions": self.checks.iter().map(|c| serde_json::json!({
                "condition": c.condition,
                "status": if c.pass { "pass" } else { "fail" },
                "witness": c.witness,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Validates the dg-category morphism conditions: coaction equivariance,
/// `nabla' L = L nabla`, `psi' L = (-1)^{|L|} L psi`; the chain-map
/// condition is reported as a separate informative check (morphisms in a
/// dg-category need not be closed).
pub fn validate_morphism(l: &Morphism, src: &PerTriple, dst: &PerTriple) -> Result<MorphismReport> {
    if l.table.len() != src.basis.len() {
        return Err(CdgaError::Shape(format!(
            "morphism table has {} rows for {} basis vectors",
            l.table.len(),
            src.basis.len()
        )));
    }
    let space = &src.phase.space;
    let mut checks = Vec::new();
    let sign = if l.total_degree.rem_euclid(2) == 1 {
        -1i64
    } else {
        1
    };
    let upto = src.check_upto.min(src.basis.len());

    let apply_l = |x: &VElem| -> Result<VElem> {
        let alg = &space.coords.alg;
        let mut out = velem_zero();
        for ((k, m), c) in x {
            let a = Element::from_monomial(alg, m.clone(), c.clone());
            velem_add(&mut out, dst.coord_mul(&a, &l.table[*k])?);
        }
        Ok(out)
    };

    // coaction: rho' . L = (L x id) . rho
    {
        let mut w = None;
        for k in 0..upto {
            let lhs = dst.coaction_apply(&apply_l(&velem_basis(k))?)?;
            let mut rhs: VTensor = BTreeMap::new();
            for (j, h) in &src.coaction[k] {
                for ((l2, m), c) in apply_l(&velem_basis(*j))? {
                    for (hm, hc) in h.terms() {
                        merge_term(&mut rhs, ((l2, m.clone()), hm.clone()), c.mul(hc));
                    }
                }
            }
            if lhs != rhs {
                w = Some(src.basis[k].key.to_string());
                break;
            }
        }
        checks.push(TripleCheck {
            condition: "coaction-equivariant".into(),
            pass: w.is_none(),
            witness: w,
        });
    }
    // nabla' L = L nabla
    {
        let mut w = None;
        'outer: for i in 0..space.frame.len() {
            for k in 0..upto {
                let lhs = dst.apply_nabla(i, &apply_l(&velem_basis(k))?)?;
                let rhs = apply_l(&src.apply_nabla(i, &velem_basis(k))?)?;
                if lhs != rhs {
                    w = Some(format!(
                        "nabla_{} on {}",
                        space.frame[i].name, src.basis[k].key
                    ));
                    break 'outer;
                }
            }
        }
        checks.push(TripleCheck {
            condition: "nabla-commute".into(),
            pass: w.is_none(),
            witness: w,
        });
    }
    // psi' L = (-1)^{|L|} L psi
    {
        let mut w = None;
        'outer: for a in 0..space.lie.dim() {
            for k in 0..upto {
                let lhs = dst.apply_psi(a, &apply_l(&velem_basis(k))?)?;
                let rhs = velem_scale(
                    &apply_l(&src.apply_psi(a, &velem_basis(k))?)?,
                    &Scalar::from_int(sign),
                );
                if lhs != rhs {
                    w = Some(format!(
                        "psi_{} on {}",
                        space.lie.basis[a].name, src.basis[k].key
                    ));
                    break 'outer;
                }
            }
        }
        checks.push(TripleCheck {
            condition: "psi-commute".into(),
            pass: w.is_none(),
            witness: w,
        });
    }
    // informative: closedness under the hom differential
    {
        let mut w = None;
        for k in 0..upto {
            let lhs = dst.apply_del(&apply_l(&velem_basis(k))?)?;
            let rhs = velem_scale(
                &apply_l(&src.apply_del(&velem_basis(k))?)?,
                &Scalar::from_int(sign),
            );
            if lhs != rhs {
                w = Some(src.basis[k].key.to_string());
                break;
            }
        }
        checks.push(TripleCheck {
            condition: "chain-closed".into(),
            pass: w.is_none(),
            witness: w,
        });
    }

    Ok(MorphismReport { checks })
}

/// The weight-`n` generating object over a point instance (no coordinate
/// generators, empty frame, rank-1 torus gauge group):
/// `V = Q[hbar] s0 + Q[hbar] s1` with `del(s1) = hbar n s0`,
/// `Psi(s0) = s1`, and coaction of weight `n`.
pub fn point_weight_triple(phase: &Arc<Phase>, weight: i64) -> Result<PerTriple> {
    let space = &phase.space;
    if !space.frame.is_empty() || space.coords.alg.num_gens() != 0 {
        return Err(CdgaError::Shape(
            "weight objects need a point instance (no edges)".into(),
        ));
    }
    if space.lie.dim() != 1 {
        return Err(CdgaError::Shape("weight objects need a rank-1 torus".into()));
    }
    let vertex = match &space.gauge.factors[0].tag {
        Tag::Vertex(v) => v.clone(),
        _ => "pt".to_string(),
    };
    let x = space.gauge.factors[0].gens[0];
    let xw = Element::from_factors(&space.gauge.alg, &[(x, weight as i32)], Scalar::one())?;
    let mut del1 = velem_zero();
    merge_term(
        &mut del1,
        (0, Monomial::unit()),
        Scalar::hbar_pow(Rat::from_integer(weight.into()), 1),
    );
    let atom = |name: &str, odd: bool| BasisKey(vec![Atom::Slot {
        place: vertex.clone(),
        name: name.into(),
        odd,
    }]);
    Ok(PerTriple::assemble(
        format!("weight({})", weight),
        phase.clone(),
        vec![
            Basis { key: atom("s0", false), chain_degree: 0 },
            Basis { key: atom("s1", true), chain_degree: 1 },
        ],
        2,
        vec![velem_zero(), del1],
        vec![],
        vec![vec![velem_basis(1), velem_zero()]],
        vec![vec![(0, xw.clone())], vec![(1, xw)]],
    ))
}

/// Enumerates the normal words (momentum multiword, antighost subset) over
/// the given hatted generators up to total length `maxlen`, in canonical
/// monomial order.
pub fn enumerate_words(
    q: &QuantizedLevel,
    momentum: &[GenId],
    antighost: &[GenId],
    maxlen: usize,
) -> Vec<Monomial> {
    // momentum multisets by total exponent
    let mut mults: Vec<Vec<(GenId, i32)>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<(GenId, i32)>> = vec![Vec::new()];
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in momentum {
                if let Some(&(last, _)) = w.last() {
                    if g < last {
                        continue;
                    }
                }
                let mut w2 = w.clone();
                match w2.last_mut() {
                    Some((g0, k)) if *g0 == g => *k += 1,
                    _ => w2.push((g, 1)),
                }
                next.push(w2);
            }
        }
        next.sort();
        next.dedup();
        mults.extend(next.iter().cloned());
        frontier = next;
    }

    let mut subsets: Vec<Vec<GenId>> = vec![Vec::new()];
    for &g in antighost {
        let mut more = Vec::new();
        for s in &subsets {
            let mut s2 = s.clone();
            s2.push(g);
            more.push(s2);
        }
        subsets.extend(more);
    }

    let mut words = Vec::new();
    for w in &mults {
        let wlen: usize = w.iter().map(|&(_, k)| k as usize).sum();
        for tau in &subsets {
            if wlen + tau.len() > maxlen {
                continue;
            }
            let mut fs = w.clone();
            for &g in tau {
                fs.push((g, 1));
            }
            let m = Monomial(fs);
            let _ = q;
            words.push(m);
        }
    }
    words.sort();
    words.dedup();
    words
}

/// Atoms of a momentum/antighost word, used as canonical basis keys.
pub fn word_atoms(q: &QuantizedLevel, w: &Monomial) -> Vec<Atom> {
    w.0.iter()
        .map(|&(g, k)| {
            let info = q.alg.info(g);
            match info.key.block {
                Block::Momentum => Atom::Momentum {
                    edge: match &info.key.tag {
                        Tag::Edge(e) => e.clone(),
                        _ => String::new(),
                    },
                    idx: info.key.index,
                    exp: k as u32,
                },
                Block::Antighost => Atom::Antighost {
                    vertex: match &info.key.tag {
                        Tag::Vertex(v) => v.clone(),
                        _ => String::new(),
                    },
                    idx: info.key.index,
                },
                _ => unreachable!("basis words contain momenta and antighosts only"),
            }
        })
        .collect()
}

/// Sorts a unit-letter word into a normal monomial with the Koszul sign;
/// `None` when an odd letter repeats.
pub fn sort_word_pub(q: &QuantizedLevel, letters: &[(GenId, i32)]) -> (Option<Monomial>, i64) {
    let mut ls: Vec<(GenId, i32)> = letters.to_vec();
    let mut sign = 1i64;
    for i in 1..ls.len() {
        let mut j = i;
        while j > 0 && ls[j - 1].0 > ls[j].0 {
            let odd_a = q.alg.info(ls[j - 1].0).bidegree.is_odd();
            let odd_b = q.alg.info(ls[j].0).bidegree.is_odd();
            if odd_a && odd_b {
                sign = -sign;
            }
            ls.swap(j - 1, j);
            j -= 1;
        }
    }
    let mut fs: Vec<(GenId, i32)> = Vec::new();
    for (g, k) in ls {
        match fs.last_mut() {
            Some((g0, k0)) if *g0 == g => {
                if q.alg.info(g).bidegree.is_odd() {
                    return (None, 0);
                }
                *k0 += k;
            }
            _ => fs.push((g, k)),
        }
    }
    (Some(Monomial(fs)), sign)
}

/// Builds the distinguished rank-one (pointing) object of a phase space,
/// truncated at the stated momentum bound.
pub fn build_pointing(phase: &Arc<Phase>, bound: usize) -> Result<PerTriple> {
    let q = &phase.qlevels[0];
    let level = &phase.levels[0];
    let reduced = &phase.reduced;
    let space = &phase.space;
    let lie = &space.lie;
    let nframe = space.frame.len();
    let dim = lie.dim();

    let momentum_hat: Vec<GenId> = reduced
        .momentum_gens
        .iter()
        .map(|g| level.b_gens[g])
        .collect();
    let antighost_hat: Vec<GenId> = reduced
        .antighost_gens
        .iter()
        .map(|g| level.b_gens[g])
        .collect();

    let pad = 2usize;
    let all_words = enumerate_words(q, &momentum_hat, &antighost_hat, bound + pad);
    let mut words: Vec<Monomial> = all_words
        .iter()
        .filter(|w| w.length() <= bound)
        .cloned()
        .collect();
    words.extend(all_words.iter().filter(|w| w.length() > bound).cloned());
    let check_upto = words.iter().filter(|w| w.length() <= bound).count();
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        index.insert(w.clone(), i);
    }

    let a_alg = &space.coords.alg;
    let split = |m: &Monomial| -> Result<(usize, Monomial)> {
        let mut coeff_fs: Vec<(GenId, i32)> = Vec::new();
        let mut word_fs: Vec<(GenId, i32)> = Vec::new();
        for &(g, k) in &m.0 {
            match q.alg.info(g).key.block {
                Block::Coord => {
                    let name = q.alg.info(g).name.trim_end_matches('^').to_string();
                    coeff_fs.push((a_alg.by_name(&name).unwrap(), k));
                }
                Block::Momentum | Block::Antighost => word_fs.push((g, k)),
                _ => {
                    return Err(CdgaError::Shape(format!(
                        "unexpected generator {} in pointing element",
                        q.alg.info(g).name
                    )))
                }
            }
        }
        let word = Monomial(word_fs);
        let idx = index.get(&word).copied().ok_or_else(|| {
            CdgaError::Shape(format!(
                "basis word beyond the truncation bound: {:?}",
                word
            ))
        })?;
        Ok((idx, Monomial(coeff_fs)))
    };
    let to_velem = |e: &Element| -> Result<VElem> {
        let mut out = velem_zero();
        for (m, c) in e.terms() {
            let (idx, coeff) = split(m)?;
            merge_term(&mut out, (idx, coeff), c.clone());
        }
        Ok(out)
    };

    let b_embed = level.b_embed();
    let mut mu_hat: Vec<Element> = Vec::new();
    for a in 0..dim {
        let mu = space.moment_map(a)?;
        let embedded = b_embed.apply(&reduced.embed_frame_expansion(&mu)?)?;
        mu_hat.push(q.hat(&embedded)?);
    }
    let theta_hat: Vec<Element> = (0..dim)
        .map(|a| Element::gen(&q.alg, level.ghosts[0][a]))
        .collect();
    let tgen = |a: usize| Element::gen(&q.alg, antighost_hat[a]);
    let vgen = |i: usize| Element::gen(&q.alg, momentum_hat[i]);

    let word_split = |w: &Monomial| -> (Vec<(GenId, i32)>, Vec<GenId>) {
        let mut wp = Vec::new();
        let mut tp = Vec::new();
        for &(g, k) in &w.0 {
            if q.alg.info(g).key.block == Block::Momentum {
                wp.push((g, k));
            } else {
                tp.push(g);
            }
        }
        (wp, tp)
    };

    let mut del: Vec<VElem> = Vec::with_capacity(words.len());
    for w in &words {
        let (w_part, tau) = word_split(w);
        let w_elem = Element::from_monomial(&q.alg, Monomial(w_part), Scalar::one());
        let mut acc = Element::zero(&q.alg);
        for (i, &ti) in tau.iter().enumerate() {
            let sign = if i % 2 == 0 { 1i64 } else { -1 };
            let lie_i = antighost_hat.iter().position(|&g| g == ti).unwrap();
            let rest: Vec<GenId> = tau
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &g)| g)
                .collect();
            let rest_elem = word_elem(&q.alg, &rest);
            let term1 = q.mul(&q.mul(&w_elem, &mu_hat[lie_i])?, &rest_elem)?;
            acc = acc.add(&term1.scale(&Scalar::from_int(sign)))?;
            let prefix_elem = word_elem(&q.alg, &tau[..i]);
            let suffix_elem = word_elem(&q.alg, &tau[i + 1..]);
            for b in 0..dim {
                let br = lie.bracket(b, lie_i);
                if br.is_empty() {
                    continue;
                }
                let comm = q.commutator(&prefix_elem, &theta_hat[b])?;
                if comm.is_zero() {
                    continue;
                }
                let mut rho = Element::zero(&q.alg);
                for (c, v) in br {
                    rho = rho.add(&tgen(c).scale_rat(&v))?;
                }
                let term2 = q.mul(&q.mul(&w_elem, &q.mul(&comm, &rho)?)?, &suffix_elem)?;
                acc = acc.add(&term2.scale(&Scalar::from_int(sign)))?;
            }
        }
        del.push(to_velem(&acc)?);
    }

    // nabla and psi raise the word length by one, so their tables are
    // exact up to length bound + pad - 1; the top headroom layer stores
    // empty entries that the bounded validation never reads (composite
    // checks apply at most two operators to words of length <= bound).
    let mut nabla: Vec<Vec<VElem>> = Vec::with_capacity(nframe);
    for i in 0..nframe {
        let mut col = Vec::with_capacity(words.len());
        for w in &words {
            if w.length() >= bound + pad {
                col.push(velem_zero());
                continue;
            }
            let we = Element::from_monomial(&q.alg, w.clone(), Scalar::one());
            col.push(to_velem(&q.mul(&vgen(i), &we)?)?);
        }
        nabla.push(col);
    }
    let mut psi: Vec<Vec<VElem>> = Vec::with_capacity(dim);
    for a in 0..dim {
        let mut col = Vec::with_capacity(words.len());
        for w in &words {
            if w.length() >= bound + pad {
                col.push(velem_zero());
                continue;
            }
            let (w_part, tau) = word_split(w);
            let we = Element::from_monomial(&q.alg, Monomial(w_part), Scalar::one());
            let taue = word_elem(&q.alg, &tau);
            col.push(to_velem(&q.mul(&q.mul(&we, &tgen(a))?, &taue)?)?);
        }
        psi.push(col);
    }

    // coaction: tensor product of the generator coactions along the word,
    // with the legs multiplied in the quantized algebra (the reordering
    // corrections carry hbar and stay within the stored filtration)
    let mut coaction: Vec<Vec<(usize, Element)>> = Vec::with_capacity(words.len());
    for w in &words {
        let mut legs: Vec<(Element, Element)> = vec![(
            Element::one(&q.alg),
            Element::one(&space.gauge.alg),
        )];
        for &(g, k) in &w.0 {
            let block = q.alg.info(g).key.block;
            for _ in 0..k {
                let coacts: Vec<(GenId, Element)> = if block == Block::Momentum {
                    let i = momentum_hat.iter().position(|&x| x == g).unwrap();
                    space.frame[i]
                        .coaction
                        .iter()
                        .map(|(j, h)| (momentum_hat[*j], h.clone()))
                        .collect()
                } else {
                    let a = antighost_hat.iter().position(|&x| x == g).unwrap();
                    lie.adjoint_coaction(a)
                        .into_iter()
                        .map(|(c, h)| (antighost_hat[c], h))
                        .collect()
                };
                let mut next = Vec::new();
                for (prefix, h0) in &legs {
                    for (g2, h) in &coacts {
                        let prod = q.mul(prefix, &Element::gen(&q.alg, *g2))?;
                        next.push((prod, h0.mul(h)?));
                    }
                }
                legs = next;
            }
        }
        let mut col: BTreeMap<usize, Element> = BTreeMap::new();
        for (lelem, h) in legs {
            for (m, c) in lelem.terms() {
                let idx = index
                    .get(m)
                    .copied()
                    .ok_or_else(|| CdgaError::Shape("coaction leg beyond truncation".into()))?;
                let entry = col
                    .entry(idx)
                    .or_insert_with(|| Element::zero(&space.gauge.alg));
                *entry = entry.add(&h.scale(c))?;
            }
        }
        coaction.push(col.into_iter().filter(|(_, h)| !h.is_zero()).collect());
    }

    let basis: Vec<Basis> = words
        .iter()
        .map(|w| {
            let mut atoms = word_atoms(q, w);
            atoms.sort();
            let chain_degree = w
                .0
                .iter()
                .filter(|(g, _)| q.alg.info(*g).key.block == Block::Antighost)
                .count() as i32;
            Basis {
                key: BasisKey(atoms),
                chain_degree,
            }
        })
        .collect();

    Ok(PerTriple::assemble(
        "pointing".into(),
        phase.clone(),
        basis,
        check_upto,
        del,
        nabla,
        psi,
        coaction,
    ))
}

fn word_elem(alg: &Arc<crate::algebra::Algebra>, word: &[GenId]) -> Element {
    let fs: Vec<(GenId, i32)> = word.iter().map(|&g| (g, 1)).collect();
    Element::from_monomial(alg, Monomial(fs), Scalar::one())
}

/// The endomorphism complex of a point-instance triple inside the
/// quantized dg-category (morphisms commuting with the coaction and the
/// antighost action), and its homology over `Q[hbar]`. For generating
/// objects of different weights the morphism complex is zero, so a single
/// triple suffices.
pub fn endo_homology_point(t: &PerTriple) -> Result<Vec<HomologySummary>> {
    hom_homology_point(t, t)
}

/// The endomorphism complex itself, for independent rank-nullity
/// cross-checks of the homology.
pub fn endo_complex_point(t: &PerTriple) -> Result<FreeComplex> {
    hom_complex_point(t, t)
}

/// The morphism complex between two point-instance triples and its
/// homology over `Q[hbar]`.
pub fn hom_homology_point(src: &PerTriple, dst: &PerTriple) -> Result<Vec<HomologySummary>> {
    Ok(hom_complex_point(src, dst)?.homology())
}

/// The equivariant morphism complex between two point-instance triples as
/// a finite free complex over `Q[hbar]`.
pub fn hom_complex_point(src: &PerTriple, dst: &PerTriple) -> Result<FreeComplex> {
    let space = &src.phase.space;
    if !space.frame.is_empty() || space.coords.alg.num_gens() != 0 {
        return Err(CdgaError::Shape(
            "full morphism homology is computed for point instances only".into(),
        ));
    }
    let ns = src.basis.len();
    let nd = dst.basis.len();
    let dim = space.lie.dim();

    // degrees present among the E_{kj} : s_j -> s'_k
    let mut all_degs: Vec<i32> = Vec::new();
    for k in 0..nd {
        for j in 0..ns {
            all_degs.push(dst.basis[k].chain_degree - src.basis[j].chain_degree);
        }
    }
    all_degs.sort();
    all_degs.dedup();

    // gauge Hopf monomial support of both coactions
    let mut h_monos: Vec<Monomial> = Vec::new();
    for row in src.coaction.iter().chain(dst.coaction.iter()) {
        for (_, h) in row {
            for (m, _) in h.terms() {
                if !h_monos.contains(m) {
                    h_monos.push(m.clone());
                }
            }
        }
    }

    let psi_entry = |t: &PerTriple, a: usize, from: usize, to: usize| -> Scalar {
        t.psi[a][from]
            .get(&(to, Monomial::unit()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    };
    let coact_coeff = |t: &PerTriple, of: usize, leg: usize, hm: &Monomial| -> Scalar {
        t.coaction[of]
            .iter()
            .find(|(l, _)| *l == leg)
            .map(|(_, h)| h.coeff(hm))
            .unwrap_or_else(Scalar::zero)
    };

    // per chain degree d: kernel of the condition matrix
    let mut kernels: Vec<(i32, Vec<(usize, usize)>, PolyMatrix)> = Vec::new();
    for &d in &all_degs {
        let idxs: Vec<(usize, usize)> = (0..nd)
            .flat_map(|k| (0..ns).map(move |j| (k, j)))
            .filter(|&(k, j)| dst.basis[k].chain_degree - src.basis[j].chain_degree == d)
            .collect();
        if idxs.is_empty() {
            continue;
        }
        let cols = idxs.len();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        // coaction equivariance per (k, j, H-monomial):
        // sum_l L_{k l} h_{l j} - h'_{k l} L_{l j} = 0
        for k in 0..nd {
            for j in 0..ns {
                for hm in &h_monos {
                    let mut row = vec![Scalar::zero(); cols];
                    let mut nonzero = false;
                    for (col, &(kk, jj)) in idxs.iter().enumerate() {
                        let mut coeff = Scalar::zero();
                        if kk == k {
                            // (L x id) rho(s_j) at leg jj
                            coeff += coact_coeff(src, j, jj, hm);
                        }
                        if jj == j {
                            // rho'(L(s_j)) component s'_k of rho'(s'_kk)
                            coeff -= coact_coeff(dst, kk, k, hm);
                        }
                        if !coeff.is_zero() {
                            nonzero = true;
                        }
                        row[col] = coeff;
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
        // psi compatibility per (a, k, j): psi' L - (-1)^{|L|} L psi = 0
        // with |L| = -d (total degree)
        let sign = if d.rem_euclid(2) == 1 { -1i64 } else { 1 };
        for a in 0..dim {
            for k in 0..nd {
                for j in 0..ns {
                    let mut row = vec![Scalar::zero(); cols];
                    let mut nonzero = false;
                    for (col, &(kk, jj)) in idxs.iter().enumerate() {
                        let mut coeff = Scalar::zero();
                        if jj == j {
                            // psi'(s'_kk) component at s'_k
                            coeff += psi_entry(dst, a, kk, k);
                        }
                        if kk == k {
                            // L(psi(s_j)): psi(s_j) component at s_jj
                            coeff -= psi_entry(src, a, j, jj).mul(&Scalar::from_int(sign));
                        }
                        if !coeff.is_zero() {
                            nonzero = true;
                        }
                        row[col] = coeff;
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
        let cond = if rows.is_empty() {
            PolyMatrix::zero(1, cols)
        } else {
            PolyMatrix::from_rows(rows)
        };
        kernels.push((d, idxs, kernel_basis(&cond)));
    }

    kernels.retain(|(_, _, k)| k.cols > 0);
    if kernels.is_empty() {
        return FreeComplex::new(0, vec![0], vec![]);
    }
    // ascending cochain degree = descending chain degree
    kernels.sort_by_key(|&(d, _, _)| -d);
    // only consecutive degrees enter the complex; insert zero-rank slots
    let top = -kernels[0].0;
    let bottom = -kernels[kernels.len() - 1].0;
    let mut slot_of = BTreeMap::new();
    for (i, (d, _, _)) in kernels.iter().enumerate() {
        slot_of.insert(-d, i);
    }

    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for m in top..=bottom {
        let rank = slot_of.get(&m).map(|&i| kernels[i].2.cols).unwrap_or(0);
        ranks.push(rank);
    }
    for m in top..bottom {
        let src_slot = slot_of.get(&m);
        let dst_slot = slot_of.get(&(m + 1));
        let rows = dst_slot.map(|&i| kernels[i].2.cols).unwrap_or(0);
        let cols_n = src_slot.map(|&i| kernels[i].2.cols).unwrap_or(0);
        let mut mat = PolyMatrix::zero(rows, cols_n);
        if let (Some(&si), Some(&di)) = (src_slot, dst_slot) {
            let (d_chain, ref idx_src, ref k_src) = kernels[si];
            let (_, ref idx_dst, ref k_dst) = kernels[di];
            let sign = if d_chain.rem_euclid(2) == 1 { -1i64 } else { 1 };
            for col in 0..k_src.cols {
                let mut image: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
                for (row_i, &(k, j)) in idx_src.iter().enumerate() {
                    let coeff = k_src.get(row_i, col).clone();
                    if coeff.is_zero() {
                        continue;
                    }
                    // del' . E_{kj}
                    for ((l, m2), c) in &dst.del[k] {
                        debug_assert!(m2.is_unit());
                        merge_term(&mut image, (*l, j), c.mul(&coeff));
                    }
                    // -(-1)^{|E|} E . del: del(s_m) component at s_j
                    for sm in 0..ns {
                        if let Some(c) = src.del[sm].get(&(j, Monomial::unit())) {
                            merge_term(
                                &mut image,
                                (k, sm),
                                c.mul(&coeff).mul(&Scalar::from_int(-sign)),
                            );
                        }
                    }
                }
                let b: Vec<Scalar> = idx_dst
                    .iter()
                    .map(|&(k, j)| image.remove(&(k, j)).unwrap_or_else(Scalar::zero))
                    .collect();
                if image.values().any(|c| !c.is_zero()) {
                    return Err(CdgaError::Shape(
                        "hom differential leaves the expected degree".into(),
                    ));
                }
                let x = solve(k_dst, &b).ok_or_else(|| {
                    CdgaError::Shape("hom differential leaves the equivariant subcomplex".into())
                })?;
                for (ridx, v) in x.into_iter().enumerate() {
                    mat.set(ridx, col, v);
                }
            }
        }
        diffs.push(mat);
    }

    FreeComplex::new(top, ranks, diffs)
}
