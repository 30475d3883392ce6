use std::hint::black_box;
use std::time::Instant;

use aben_core::cpabe::{cp_decrypt, cp_encrypt, cp_keygen, cp_setup};
use aben_core::envelope::Encode;
use aben_core::kpabe::{kp_decrypt, kp_encrypt, kp_keygen, kp_setup};
use aben_core::pairing::{generate_params, GroupParams, SecurityLevel};
use aben_core::policy::{AccessNode, AccessTree, AttributeSet};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::plan::{BenchPlan, Op, Scheme, Shape};
use crate::BenchError;

/// One timed execution.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BenchRecord {
    pub scheme: Scheme,
    pub op: Op,
    pub sec_level: u16,
    pub n_attrs: usize,
    pub rep: usize,
    pub duration_ns: u64,
    pub size_bytes: usize,
}

/// The policy and attribute set a cell of `n` attributes exercises.
pub fn workload(shape: Shape, n: usize) -> (AccessTree, AttributeSet) {
    let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let attrs = AttributeSet::new(names.iter()).expect("generated names are valid");
    let leaves: Vec<AccessNode> = names.iter().map(AccessNode::leaf).collect();
    let root = match (shape, n) {
        (_, 1) => leaves.into_iter().next().expect("one leaf"),
        (Shape::AndChain, _) => AccessNode::and(leaves),
        (Shape::KOfN { k }, _) => AccessNode::gate(k.min(n), leaves),
    };
    (AccessTree::new(root).expect("generated policy is valid"), attrs)
}

fn seeded(seed: u64, parts: &[u64]) -> ChaCha20Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    for (i, p) in parts.iter().enumerate().take(3) {
        bytes[8 * (i + 1)..8 * (i + 2)].copy_from_slice(&p.to_le_bytes());
    }
    ChaCha20Rng::from_seed(bytes)
}

/// Group parameters for every level of the plan, generated from its seed.
pub fn plan_params(plan: &BenchPlan) -> Result<Vec<(SecurityLevel, GroupParams)>, BenchError> {
    plan.levels
        .iter()
        .map(|&level| {
            let mut rng = seeded(plan.seed, &[u64::from(level.bits())]);
            Ok((level, generate_params(level, &mut rng)?))
        })
        .collect()
}

/// Times `f`, returning its output and the elapsed nanoseconds (at least 1).
fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = black_box(f());
    let ns = start.elapsed().as_nanos().clamp(1, u128::from(u64::MAX)) as u64;
    (out, ns)
}

/// Runs every cell of `plan` on the calling thread.
pub fn run_plan(plan: &BenchPlan) -> Result<Vec<BenchRecord>, BenchError> {
    plan.validate()?;
    let params = plan_params(plan)?;
    let mut records = Vec::with_capacity(plan.cell_count() * plan.reps);
    for (level, params) in &params {
        for &scheme in &plan.schemes {
            for &n in &plan.attr_counts {
                run_cell(plan, scheme, *level, params, n, &mut records)?;
            }
        }
    }
    Ok(records)
}

fn run_cell(
    plan: &BenchPlan,
    scheme: Scheme,
    level: SecurityLevel,
    params: &GroupParams,
    n: usize,
    records: &mut Vec<BenchRecord>,
) -> Result<(), BenchError> {
    let (policy, attrs) = workload(plan.shape, n);
    if plan.ops.contains(&Op::Decrypt) && !policy.satisfies(&attrs) {
        return Err(BenchError::PlanInfeasible(format!("{policy} is not satisfied by {attrs}")));
    }
    let mut rng = seeded(plan.seed, &[u64::from(level.bits()), scheme as u64, n as u64]);
    let mut push = |op: Op, rep: usize, duration_ns: u64, size_bytes: usize| {
        records.push(BenchRecord {
            scheme,
            op,
            sec_level: level.bits(),
            n_attrs: n,
            rep,
            duration_ns,
            size_bytes,
        })
    };
    match scheme {
        Scheme::Cp => {
            let (pk, mk) = cp_setup(params, &mut rng)?;
            let sk = cp_keygen(&pk, &mk, &attrs, &mut rng)?;
            let (header, _) = cp_encrypt(&pk, &policy, &mut rng)?;
            for &op in &plan.ops {
                for rep in 0..plan.warmup + plan.reps {
                    let (size, ns) = match op {
                        Op::Setup => {
                            let (out, ns) = timed(|| cp_setup(params, &mut rng));
                            (out?.0.encode().len(), ns)
                        }
                        Op::Keygen => {
                            let (out, ns) = timed(|| cp_keygen(&pk, &mk, &attrs, &mut rng));
                            ((&out?, params).encode().len(), ns)
                        }
                        Op::Encrypt => {
                            let (out, ns) = timed(|| cp_encrypt(&pk, &policy, &mut rng));
                            ((&out?.0, params).encode().len(), ns)
                        }
                        Op::Decrypt => {
                            let (out, ns) = timed(|| cp_decrypt(&pk, &sk, &header));
                            out?;
                            ((&header, params).encode().len(), ns)
                        }
                    };
                    if rep >= plan.warmup {
                        push(op, rep - plan.warmup, ns, size);
                    }
                }
            }
        }
        Scheme::Kp => {
            let universe: Vec<String> = attrs.iter().map(str::to_string).collect();
            let (pk, mk) = kp_setup(params, &universe, &mut rng)?;
            let sk = kp_keygen(&pk, &mk, &policy, &mut rng)?;
            let (header, _) = kp_encrypt(&pk, &attrs, &mut rng)?;
            for &op in &plan.ops {
                for rep in 0..plan.warmup + plan.reps {
                    let (size, ns) = match op {
                        Op::Setup => {
                            let (out, ns) = timed(|| kp_setup(params, &universe, &mut rng));
                            (out?.0.encode().len(), ns)
                        }
                        Op::Keygen => {
                            let (out, ns) = timed(|| kp_keygen(&pk, &mk, &policy, &mut rng));
                            ((&out?, params).encode().len(), ns)
                        }
                        Op::Encrypt => {
                            let (out, ns) = timed(|| kp_encrypt(&pk, &attrs, &mut rng));
                            ((&out?.0, params).encode().len(), ns)
                        }
                        Op::Decrypt => {
                            let (out, ns) = timed(|| kp_decrypt(&pk, &sk, &header));
                            out?;
                            ((&header, params).encode().len(), ns)
                        }
                    };
                    if rep >= plan.warmup {
                        push(op, rep - plan.warmup, ns, size);
                    }
                }
            }
        }
    }
    Ok(())
}
