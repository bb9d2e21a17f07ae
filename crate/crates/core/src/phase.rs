//! Bundles one instance's full tower: reduced chain algebra, cosimplicial
//! levels, Poisson brackets, and quantized algebras. Levels are built once
//! up to the requested depth and shared immutably.

use crate::ce::{build_level, Level};
use crate::error::Result;
use crate::poisson::{build_reduced, AffineGSpace, PoissonBracket, ReducedCdga};
use crate::quantize::QuantizedLevel;
use std::sync::Arc;

pub struct Phase {
    pub space: Arc<AffineGSpace>,
    pub reduced: Arc<ReducedCdga>,
    pub levels: Vec<Arc<Level>>,
    pub brackets: Vec<Arc<PoissonBracket>>,
    pub qlevels: Vec<Arc<QuantizedLevel>>,
}

impl Phase {
    pub fn build(space: Arc<AffineGSpace>, max_level: usize) -> Result<Phase> {
        let reduced = Arc::new(build_reduced(&space)?);
        let mut levels = Vec::new();
        let mut brackets = Vec::new();
        let mut qlevels = Vec::new();
        for n in 0..=max_level {
            let level = build_level(n, &reduced.chain, &space.gauge, &space.lie)?;
            let bracket = Arc::new(PoissonBracket::build(&reduced, &level)?);
            let qlevel = Arc::new(QuantizedLevel::build(&level, &bracket)?);
            levels.push(level);
            brackets.push(bracket);
            qlevels.push(qlevel);
        }
        Ok(Phase {
            space,
            reduced,
            levels,
            brackets,
            qlevels,
        })
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }
}
