//! Generators-and-relations presentations of the modeled groups, and the
//! verifier that replays a presentation inside the group model.

use super::GroupModel;
use crate::error::{Error, Result};
use crate::gf::Prime;
use crate::pencil::canonical_block;
use crate::weakcong::ClassFunction;
use std::fmt;

/// One commutator relation `[h<block>_<i>, h<block>_<j>] = sum value[t] a_{t+1}`
/// with i < j, both 1-based within the block. Relations between different
/// blocks vanish and are never stored; so do zero values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub value: Vec<u64>,
}

/// A presentation: per-block generator counts plus the nonzero commutator
/// table. Implicit in every presentation: all generators have order p and
/// the bottom is central.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub p: Prime,
    pub n: usize,
    pub block_sizes: Vec<usize>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn total_generators(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn generator_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.total_generators());
        for (k, &size) in self.block_sizes.iter().enumerate() {
            for i in 1..=size {
                names.push(format!("h{}_{}", k + 1, i));
            }
        }
        names
    }

    /// Flat generator index of (block, i), both as stored in relations.
    fn flat(&self, block: usize, i: usize) -> usize {
        self.block_sizes[..block - 1].iter().sum::<usize>() + i - 1
    }
}

impl fmt::Display for Presentation {
    /// The fixed text format: a header line, one `gen` line per generator,
    /// then one `rel` line per nonzero relation, sorted by (block, i, j).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p={} n={}", self.p.get(), self.n)?;
        for name in self.generator_names() {
            writeln!(f, "gen {name}")?;
        }
        for rel in &self.relations {
            let terms: Vec<String> = rel
                .value
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(t, &c)| format!("{c}*a{}", t + 1))
                .collect();
            writeln!(
                f,
                "rel [h{k}_{i}, h{k}_{j}] = {}",
                terms.join(" + "),
                k = rel.block,
                i = rel.i,
                j = rel.j,
            )?;
        }
        Ok(())
    }
}

/// The presentation of the group attached to a class function: one
/// generator batch per canonical block, commutators read off the doubled
/// block matrices. Blocks appear in canonical order.
pub fn build_presentation(rho: &ClassFunction) -> Result<Presentation> {
    let p = rho.modulus();
    p.require_odd()?;
    let mut block_sizes = Vec::new();
    let mut relations = Vec::new();
    let mut block_no = 0usize;
    for (spec, mult) in rho.iter() {
        let tuple = canonical_block(p, spec)?;
        for _ in 0..mult {
            block_no += 1;
            block_sizes.push(tuple.size());
            for i in 0..tuple.size() {
                for j in i + 1..tuple.size() {
                    let value = tuple.entry(i, j);
                    if value.iter().any(|&v| v != 0) {
                        relations.push(Relation {
                            block: block_no,
                            i: i + 1,
                            j: j + 1,
                            value,
                        });
                    }
                }
            }
        }
    }
    Ok(Presentation {
        p,
        n: 2,
        block_sizes,
        relations,
    })
}

/// The single-bottom presentations: one block of 2k generators with
/// [h_i, h_{k+i}] = a_1, followed by l lone order-p generators.
pub fn presentation_n1(p: Prime, k: usize, l: usize) -> Presentation {
    let mut block_sizes = Vec::new();
    let mut relations = Vec::new();
    if k > 0 {
        block_sizes.push(2 * k);
        for i in 1..=k {
            relations.push(Relation {
                block: 1,
                i,
                j: k + i,
                value: vec![1],
            });
        }
    }
    for _ in 0..l {
        block_sizes.push(1);
    }
    Presentation {
        p,
        n: 1,
        block_sizes,
        relations,
    }
}

/// Outcome of replaying a presentation inside a model; failures carry the
/// first counterexample found per check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub pass: bool,
    pub checks_run: usize,
    pub failures: Vec<String>,
}

/// Check, inside the model: every generator dies under p, sampled bottom
/// elements are central, and every commutator of generators matches the
/// table (zero when unlisted or across blocks).
pub fn verify_presentation(g: &GroupModel, pres: &Presentation) -> Result<VerifyReport> {
    let p = g.modulus();
    let total = pres.total_generators();
    if g.top_rank() != total || g.bottom_rank() != pres.n {
        return Err(Error::Dimension(format!(
            "model has {} generators and bottom rank {}, presentation has {} and {}",
            g.top_rank(),
            g.bottom_rank(),
            total,
            pres.n
        )));
    }
    let mut failures = Vec::new();
    let mut checks = 0usize;
    let names = pres.generator_names();

    // p * generator = 0
    for i in 0..total {
        checks += 1;
        let gen = g.generator(i);
        if g.multiple(&gen, p.get())? != g.zero() {
            failures.push(format!("p * {} is not zero", names[i]));
        }
    }

    // centrality of bottom samples against every generator
    for b in 0..pres.n {
        let samples = [
            g.bottom_unit(b),
            g.element(
                crate::chernikov::PruferVector::new(
                    p,
                    (0..pres.n)
                        .map(|t| {
                            if t == b {
                                crate::chernikov::PruferElem::new(p, 1, 2).unwrap()
                            } else {
                                crate::chernikov::PruferElem::zero(p)
                            }
                        })
                        .collect(),
                ),
                crate::cohomology::TopVector::zero(p, total),
            )?,
        ];
        for (si, sample) in samples.iter().enumerate() {
            for i in 0..total {
                checks += 1;
                if g.commutator(sample, &g.generator(i))? != g.zero() {
                    failures.push(format!(
                        "bottom sample {si} at coordinate {b} does not commute with {}",
                        names[i]
                    ));
                }
            }
        }
    }

    // the full commutator table
    let mut expected = vec![vec![None::<&[u64]>; total]; total];
    for rel in &pres.relations {
        let a = pres.flat(rel.block, rel.i);
        let b = pres.flat(rel.block, rel.j);
        expected[a][b] = Some(&rel.value);
    }
    for i in 0..total {
        for j in i + 1..total {
            checks += 1;
            let got = g.commutator(&g.generator(i), &g.generator(j))?;
            let want_values = expected[i][j].map(<[u64]>::to_vec).unwrap_or_else(|| vec![0; pres.n]);
            let want = g.element(
                crate::chernikov::PruferVector::from_residues(p, &want_values),
                crate::cohomology::TopVector::zero(p, total),
            )?;
            if got != want {
                failures.push(format!(
                    "[{}, {}] disagrees with the table",
                    names[i], names[j]
                ));
            }
        }
    }

    Ok(VerifyReport {
        pass: failures.is_empty(),
        checks_run: checks,
        failures,
    })
}
