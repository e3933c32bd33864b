use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{random_digraph, CutFunction, DirectedGraph, Oracle};
use crate::{seed, Error, Result};

/// Parameters of a random directed-cut instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomCut {
    pub n: u32,
    pub density: f64,
    pub weights: (f64, f64),
}

impl RandomCut {
    pub fn new(n: u32, density: f64) -> Self {
        Self { n, density, weights: (0.0, 1.0) }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DirectedGraph> {
        random_digraph(self.n, self.density, self.weights, rng)
    }
}

/// Descriptor of an instance family for adversary sequences.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// A fresh random cut function every round.
    RandomCut(RandomCut),
    /// The given graphs, repeated in order.
    CycleThrough(Vec<DirectedGraph>),
    /// Each round, a uniformly chosen component emits its next function.
    Mixture(Vec<Family>),
}

impl Family {
    pub fn n(&self) -> Result<u32> {
        match self {
            Family::RandomCut(r) => Ok(r.n),
            Family::CycleThrough(graphs) => {
                let first = graphs
                    .first()
                    .ok_or_else(|| Error::Config("cycle-through needs at least one graph".into()))?;
                if graphs.iter().any(|g| g.n() != first.n()) {
                    return Err(Error::Config("cycle-through graphs differ in vertex count".into()));
                }
                Ok(first.n())
            }
            Family::Mixture(parts) => {
                let mut ns = parts.iter().map(Family::n);
                let n = ns.next().ok_or_else(|| Error::Config("mixture needs at least one component".into()))??;
                for m in ns {
                    if m? != n {
                        return Err(Error::Config(format!("mixture components disagree on n (expected {n})")));
                    }
                }
                Ok(n)
            }
        }
    }
}

struct Stream<'a> {
    family: &'a Family,
    cycle: Vec<CutFunction>,
    position: usize,
    parts: Vec<Stream<'a>>,
}

impl<'a> Stream<'a> {
    fn new(family: &'a Family) -> Self {
        let cycle = match family {
            Family::CycleThrough(graphs) => {
                graphs.iter().map(|g| CutFunction::new(Arc::new(g.clone()))).collect()
            }
            _ => Vec::new(),
        };
        let parts = match family {
            Family::Mixture(parts) => parts.iter().map(Stream::new).collect(),
            _ => Vec::new(),
        };
        Self { family, cycle, position: 0, parts }
    }

    fn next(&mut self, rng: &mut ChaCha8Rng) -> Result<CutFunction> {
        match self.family {
            Family::RandomCut(r) => Ok(CutFunction::new(Arc::new(r.sample(rng)?))),
            Family::CycleThrough(_) => {
                let f = self.cycle[self.position % self.cycle.len()].clone();
                self.position += 1;
                Ok(f)
            }
            Family::Mixture(_) => {
                let k = rng.gen_range(0..self.parts.len());
                self.parts[k].next(rng)
            }
        }
    }
}

/// `count` oracles drawn from `family`, deterministic in `seed`.
///
/// Each returned oracle has its own counter, starting at zero.
pub fn synth_sequence(family: &Family, count: usize, seed: u64) -> Result<Vec<Oracle<CutFunction>>> {
    family.n()?;
    let mut rng = seed::rng_from_seed(seed);
    let mut stream = Stream::new(family);
    (0..count).map(|_| stream.next(&mut rng).map(Oracle::new)).collect()
}
