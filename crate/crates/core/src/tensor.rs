//! Graded tensor products of monomial algebras.
//!
//! A [`Tensor`] is a finite linear combination of pure tensors of
//! monomials, one slot per tensor factor, with a single `Q[hbar]`
//! coefficient per term. Sweedler expansions `h_(1) x ... x h_(n+1)`,
//! coactions `B -> B x H` and their iterates are all values of this type;
//! the implicit Sweedler summation is realized as the explicit term list.
//!
//! Multiplication uses the Koszul sign of the total degrees: crossing the
//! slot-`j` content of the left factor past the slot-`i` content of the
//! right factor (`i < j`) contributes `(-1)^{|x_j||y_i|}`.

use crate::algebra::{merge_term, Algebra, Element, Monomial};
use crate::error::{CdgaError, Result};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone)]
pub struct Tensor {
    pub slots: Vec<Arc<Algebra>>,
    pub terms: BTreeMap<Vec<Monomial>, Scalar>,
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Self) -> bool {
        self.slots.len() == other.slots.len()
            && self
                .slots
                .iter()
                .zip(&other.slots)
                .all(|(a, b)| a.id == b.id)
            && self.terms == other.terms
    }
}
impl Eq for Tensor {}

impl Tensor {
    pub fn zero(slots: Vec<Arc<Algebra>>) -> Self {
        Tensor {
            slots,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(slots: Vec<Arc<Algebra>>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![Monomial::unit(); slots.len()], Scalar::one());
        Tensor { slots, terms }
    }

    /// One-slot tensor from an element.
    pub fn from_element(e: &Element) -> Self {
        Tensor {
            slots: vec![e.alg().clone()],
            terms: e.terms().map(|(m, c)| (vec![m.clone()], c.clone())).collect(),
        }
    }

    /// Pure tensor from a list of elements (expands the product of sums).
    pub fn pure(parts: &[Element]) -> Self {
        let slots: Vec<_> = parts.iter().map(|e| e.alg().clone()).collect();
        let mut terms: BTreeMap<Vec<Monomial>, Scalar> = BTreeMap::new();
        let mut stack: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for part in parts {
            let mut next = Vec::new();
            for (prefix, c) in &stack {
                for (m, s) in part.terms() {
                    let mut p = prefix.clone();
                    p.push(m.clone());
                    next.push((p, c.mul(s)));
                }
            }
            stack = next;
        }
        for (ms, c) in stack {
            merge_term(&mut terms, ms, c);
        }
        let mut out: BTreeMap<Vec<Monomial>, Scalar> = BTreeMap::new();
        for (k, v) in terms {
            merge_term(&mut out, k, v);
        }
        Tensor { slots, terms: out }
    }

    pub fn num_slots(&self) -> usize {
        self.slots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        if c.is_zero() {
            return Tensor::zero(self.slots.clone());
        }
        Tensor {
            slots: self.slots.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, s)| (m.clone(), s.mul(c)))
                .collect(),
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_slots(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            merge_term(&mut terms, m.clone(), c.clone());
        }
        Ok(Tensor {
            slots: self.slots.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    fn check_slots(&self, other: &Tensor) -> Result<()> {
        if self.slots.len() != other.slots.len()
            || self
                .slots
                .iter()
                .zip(&other.slots)
                .any(|(a, b)| a.id != b.id)
        {
            return Err(CdgaError::Shape("tensor slot mismatch".into()));
        }
        Ok(())
    }

    /// Graded product of tensors with matching slot algebras.
    pub fn mul(&self, other: &Tensor) -> Result<Tensor> {
        self.check_slots(other)?;
        let n = self.slots.len();
        let mut terms: BTreeMap<Vec<Monomial>, Scalar> = BTreeMap::new();
        for (xs, cx) in &self.terms {
            let xdeg: Vec<i32> = (0..n)
                .map(|i| self.slots[i].monomial_bidegree(&xs[i]).total())
                .collect();
            for (ys, cy) in &other.terms {
                // Koszul sign: crossing x_j past y_i for i < j
                let mut sign = 1i64;
                for j in 1..n {
                    if xdeg[j].rem_euclid(2) == 1 {
                        for (i, y) in ys.iter().enumerate().take(j) {
                            if self.slots[i].monomial_bidegree(y).total().rem_euclid(2) == 1 {
                                sign = -sign;
                            }
                        }
                    }
                }
                // slot-wise products, each possibly expanding
                let mut partial: Vec<(Vec<Monomial>, Scalar)> =
                    vec![(Vec::new(), cx.mul(cy).mul(&Scalar::from_int(sign)))];
                for i in 0..n {
                    let mut fs = xs[i].0.clone();
                    fs.extend_from_slice(&ys[i].0);
                    let expansion = self.slots[i].normalize_factors(&fs)?;
                    let mut next = Vec::new();
                    for (prefix, c) in &partial {
                        for (m, s) in &expansion {
                            let mut p = prefix.clone();
                            p.push(m.clone());
                            next.push((p, c.mul(s)));
                        }
                    }
                    partial = next;
                }
                for (ms, c) in partial {
                    merge_term(&mut terms, ms, c);
                }
            }
        }
        Ok(Tensor {
            slots: self.slots.clone(),
            terms,
        })
    }

    pub fn pow(&self, k: i32) -> Result<Tensor> {
        if k == 0 {
            return Ok(Tensor::unit(self.slots.clone()));
        }
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        let mut acc = Tensor::unit(self.slots.clone());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Inverts a single-term tensor of invertible monomials.
    pub fn invert(&self) -> Result<Tensor> {
        if self.terms.len() != 1 {
            return Err(CdgaError::NotInvertible("tensor".into()));
        }
        let (ms, c) = self.terms.iter().next().unwrap();
        if !c.is_unit() {
            return Err(CdgaError::NotInvertible("tensor coefficient".into()));
        }
        let mut inv_ms = Vec::with_capacity(ms.len());
        for (i, m) in ms.iter().enumerate() {
            let e = Element::from_monomial(&self.slots[i], m.clone(), Scalar::one());
            let inv = e.invert()?;
            let (im, ic) = inv.terms().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            debug_assert!(ic.is_one());
            inv_ms.push(im);
        }
        let c0 = c.eval_zero();
        let mut terms = BTreeMap::new();
        terms.insert(
            inv_ms,
            Scalar::from_rat(<crate::scalar::Rat as num_traits::One>::one() / c0),
        );
        Ok(Tensor {
            slots: self.slots.clone(),
            terms,
        })
    }

    /// Applies an element-valued function to slot `i`, splicing the result
    /// back into the same slot (the function must stay in that algebra).
    pub fn map_slot(&self, i: usize, f: impl Fn(&Element) -> Result<Element>) -> Result<Tensor> {
        let mut terms: BTreeMap<Vec<Monomial>, Scalar> = BTreeMap::new();
        for (ms, c) in &self.terms {
            let e = Element::from_monomial(&self.slots[i], ms[i].clone(), Scalar::one());
            let img = f(&e)?;
            for (m, s) in img.terms() {
                let mut p = ms.clone();
                p[i] = m.clone();
                merge_term(&mut terms, p, c.mul(s));
            }
        }
        Ok(Tensor {
            slots: self.slots.clone(),
            terms,
        })
    }

    /// Replaces slot `i` by the (possibly multi-slot) expansion `f` of its
    /// monomials; used for comultiplication into two slots.
    pub fn expand_slot(
        &self,
        i: usize,
        new_slots: Vec<Arc<Algebra>>,
        f: impl Fn(&Monomial) -> Result<Tensor>,
    ) -> Result<Tensor> {
        let mut slots = self.slots.clone();
        slots.splice(i..=i, new_slots.iter().cloned());
        let mut terms: BTreeMap<Vec<Monomial>, Scalar> = BTreeMap::new();
        for (ms, c) in &self.terms {
            let expanded = f(&ms[i])?;
            if expanded.slots.len() != new_slots.len() {
                return Err(CdgaError::Shape("slot expansion arity".into()));
            }
            for (sub, sc) in &expanded.terms {
                let mut p: Vec<Monomial> = Vec::with_capacity(slots.len());
                p.extend_from_slice(&ms[..i]);
                p.extend(sub.iter().cloned());
                p.extend_from_slice(&ms[i + 1..]);
                merge_term(&mut terms, p, c.mul(sc));
            }
        }
        Ok(Tensor { slots, terms })
    }

    /// Contracts slot `i` with a scalar-valued functional on monomials
    /// (a counit or a counit-derivation), removing the slot.
    pub fn contract_slot(&self, i: usize, f: impl Fn(&Monomial) -> Scalar) -> Tensor {
        let mut slots = self.slots.clone();
        slots.remove(i);
        let mut terms: BTreeMap<Vec<Monomial>, Scalar> = BTreeMap::new();
        for (ms, c) in &self.terms {
            let v = f(&ms[i]);
            if v.is_zero() {
                continue;
            }
            let mut p = ms.clone();
            p.remove(i);
            merge_term(&mut terms, p, c.mul(&v));
        }
        Tensor { slots, terms }
    }

    /// Multiplies slot `i` into slot `i+1` (same algebra), removing a slot.
    /// No Koszul sign arises because the slots are adjacent.
    pub fn merge_slots(&self, i: usize) -> Result<Tensor> {
        if self.slots[i].id != self.slots[i + 1].id {
            return Err(CdgaError::Shape("merging slots of different algebras".into()));
        }
        let mut slots = self.slots.clone();
        slots.remove(i + 1);
        let mut terms: BTreeMap<Vec<Monomial>, Scalar> = BTreeMap::new();
        for (ms, c) in &self.terms {
            let mut fs = ms[i].0.clone();
            fs.extend_from_slice(&ms[i + 1].0);
            for (m, s) in self.slots[i].normalize_factors(&fs)? {
                let mut p: Vec<Monomial> = Vec::with_capacity(slots.len());
                p.extend_from_slice(&ms[..i]);
                p.push(m);
                p.extend_from_slice(&ms[i + 2..]);
                merge_term(&mut terms, p, c.mul(&s));
            }
        }
        Ok(Tensor { slots, terms })
    }

    /// Single-slot tensor back to an element.
    pub fn into_element(&self) -> Result<Element> {
        if self.slots.len() != 1 {
            return Err(CdgaError::Shape(format!(
                "expected 1 slot, got {}",
                self.slots.len()
            )));
        }
        Ok(Element::from_terms(
            &self.slots[0],
            self.terms.iter().map(|(ms, c)| (ms[0].clone(), c.clone())),
        ))
    }
}

impl std::fmt::Debug for Tensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (ms, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (i, m) in ms.iter().enumerate() {
                let e = Element::from_monomial(&self.slots[i], m.clone(), Scalar::one());
                write!(f, "{}{}", if i == 0 { "·" } else { "⊗" }, e)?;
            }
        }
        Ok(())
    }
}
