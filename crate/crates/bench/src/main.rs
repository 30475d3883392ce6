use std::fs;
use std::path::{Path, PathBuf};

use aben_bench::plan::{parse_counts, parse_levels, parse_ops};
use aben_bench::{
    emit_records, emit_summaries, plan_metadata, run_plan, sibling_path, summarize_plan, BenchPlan, SchemeChoice,
    Shape,
};
use aben_core::cpabe::{cp_keygen, cp_setup, CpMasterKey};
use aben_core::envelope::{open_cp, open_kp, seal_cp, seal_kp, Decode, Encode, Envelope, PublicKey};
use aben_core::kpabe::{kp_keygen, kp_setup, KpMasterKey};
use aben_core::pairing::{generate_params, SecurityLevel};
use aben_core::policy::{parse_policy, AttributeSet};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::OsRng;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

// Aliases keep clap from treating these comma-parsed lists as repeated flags.
type OpList = Vec<aben_bench::Op>;
type CountList = Vec<usize>;
type LevelList = Vec<SecurityLevel>;

#[derive(Parser)]
#[command(name = "aben", version, about = "Attribute-based encryption toolkit and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    And,
    Kofn,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Cp,
    Kp,
}

#[derive(Subcommand)]
enum Command {
    /// Time scheme operations across attribute counts and security levels.
    Bench {
        #[arg(long, default_value = "both")]
        scheme: SchemeChoice,
        #[arg(long, default_value = "setup,keygen,encrypt,decrypt", value_parser = parse_ops)]
        op: OpList,
        #[arg(long, default_value = "1..30", value_parser = parse_counts)]
        attrs: CountList,
        #[arg(long, default_value = "80", value_parser = parse_levels)]
        levels: LevelList,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, value_enum, default_value = "and")]
        shape: ShapeArg,
        /// Threshold for `--shape kofn`; clamped to N in cells with fewer attributes.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Raw per-repetition CSV.
        #[arg(long)]
        out: PathBuf,
        /// Also write per-cell statistics next to `--out` and print them.
        #[arg(long)]
        summary: bool,
        /// Untimed runs per cell before measurement.
        #[arg(long, default_value_t = 0)]
        warmup: usize,
    },
    /// Generate group parameters and a key pair.
    Setup {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long, default_value = "80")]
        level: SecurityLevel,
        /// Attribute universe (KP-ABE only), comma separated.
        #[arg(long)]
        universe: Option<String>,
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long)]
        msk: PathBuf,
        /// Deterministic randomness, for tests and reproducible fixtures.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Issue a private key: for attributes (CP-ABE) or for a policy (KP-ABE).
    Keygen {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long)]
        msk: PathBuf,
        #[arg(long)]
        attrs: Option<String>,
        #[arg(long)]
        policy: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Encrypt a file under a policy (CP-ABE) or attributes (KP-ABE).
    Encrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long)]
        policy: Option<String>,
        #[arg(long)]
        attrs: Option<String>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decrypt an envelope with a private key.
    Decrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn rng(seed: Option<u64>) -> Box<dyn RngCore> {
    match seed {
        Some(s) => Box::new(ChaCha20Rng::seed_from_u64(s)),
        None => Box::new(OsRng),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn read_public(path: &Path) -> Result<PublicKey> {
    PublicKey::from_bytes(&read(path)?).with_context(|| format!("loading {}", path.display()))
}

fn attrs_arg(attrs: Option<String>, what: &str) -> Result<AttributeSet> {
    let Some(text) = attrs else {
        bail!("{what} needs --attrs");
    };
    Ok(AttributeSet::parse(&text)?)
}

fn policy_arg(policy: Option<String>, what: &str) -> Result<aben_core::policy::AccessTree> {
    let Some(text) = policy else {
        bail!("{what} needs --policy");
    };
    Ok(parse_policy(&text)?)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Bench {
            scheme,
            op,
            attrs,
            levels,
            reps,
            shape,
            k,
            seed,
            out,
            summary,
            warmup,
        } => {
            let plan = BenchPlan {
                schemes: scheme.schemes(),
                ops: op,
                attr_counts: attrs,
                levels,
                reps,
                warmup,
                seed,
                shape: match shape {
                    ShapeArg::And => Shape::AndChain,
                    ShapeArg::Kofn => Shape::KOfN { k },
                },
                out: Some(out.clone()),
            };
            let records = run_plan(&plan)?;
            emit_records(&records, &out)?;
            write(&sibling_path(&out, "meta.txt"), plan_metadata(&plan).as_bytes())?;
            eprintln!("{} records written to {}", records.len(), out.display());
            if summary {
                let summaries = summarize_plan(&plan, &records)?;
                let path = sibling_path(&out, "summary.csv");
                emit_summaries(&summaries, &path)?;
                println!("scheme op       level  N   mean_ms    std_ms");
                for s in &summaries {
                    println!(
                        "{:<6} {:<8} {:>5} {:>3} {:>9.3} {:>9.3}",
                        s.scheme,
                        s.op,
                        s.sec_level,
                        s.n_attrs,
                        s.mean_ns / 1e6,
                        s.std_ns / 1e6
                    );
                }
                eprintln!("summary written to {}", path.display());
            }
        }
        Command::Setup {
            scheme,
            level,
            universe,
            public,
            msk,
            seed,
        } => {
            let mut rng = rng(seed);
            let params = generate_params(level, &mut rng)?;
            match scheme {
                SchemeArg::Cp => {
                    if universe.is_some() {
                        bail!("--universe applies to KP-ABE only");
                    }
                    let (pk, mk) = cp_setup(&params, &mut rng)?;
                    write(&public, &pk.encode())?;
                    write(&msk, &(&mk, &params).encode())?;
                }
                SchemeArg::Kp => {
                    let Some(universe) = universe else {
                        bail!("KP-ABE setup needs --universe");
                    };
                    let names: Vec<String> = universe.split(',').map(|s| s.trim().to_string()).collect();
                    let (pk, mk) = kp_setup(&params, &names, &mut rng)?;
                    write(&public, &pk.encode())?;
                    write(&msk, &(&mk, &params).encode())?;
                }
            }
        }
        Command::Keygen {
            public,
            msk,
            attrs,
            policy,
            out,
            seed,
        } => {
            let pk = read_public(&public)?;
            let mut rng = rng(seed);
            let mk_bytes = read(&msk)?;
            let key = match &pk {
                PublicKey::Cp(pk) => {
                    let mk = CpMasterKey::decode(&mk_bytes, &pk.params)
                        .with_context(|| format!("loading {}", msk.display()))?;
                    let sk = cp_keygen(pk, &mk, &attrs_arg(attrs, "CP-ABE keygen")?, &mut rng)?;
                    (&sk, &pk.params).encode()
                }
                PublicKey::Kp(pk) => {
                    let mk = KpMasterKey::decode(&mk_bytes, &pk.params)
                        .with_context(|| format!("loading {}", msk.display()))?;
                    let sk = kp_keygen(pk, &mk, &policy_arg(policy, "KP-ABE keygen")?, &mut rng)?;
                    (&sk, &pk.params).encode()
                }
            };
            write(&out, &key)?;
        }
        Command::Encrypt {
            public,
            policy,
            attrs,
            input,
            out,
            seed,
        } => {
            let pk = read_public(&public)?;
            let payload = read(&input)?;
            let mut rng = rng(seed);
            let env = match &pk {
                PublicKey::Cp(pk) => seal_cp(pk, &policy_arg(policy, "CP-ABE encryption")?, &payload, &mut rng)?,
                PublicKey::Kp(pk) => seal_kp(pk, &attrs_arg(attrs, "KP-ABE encryption")?, &payload, &mut rng)?,
            };
            write(&out, &env.encode())?;
        }
        Command::Decrypt {
            public,
            key,
            input,
            out,
        } => {
            let pk = read_public(&public)?;
            let key_bytes = read(&key)?;
            let env = Envelope::from_bytes(&read(&input)?)?;
            let load_err = || format!("loading {}", key.display());
            let payload = match &pk {
                PublicKey::Cp(pk) => {
                    let sk = Decode::decode(&key_bytes, &pk.params).with_context(load_err)?;
                    open_cp(pk, &sk, &env)?
                }
                PublicKey::Kp(pk) => {
                    let sk = Decode::decode(&key_bytes, &pk.params).with_context(load_err)?;
                    open_kp(pk, &sk, &env)?
                }
            };
            write(&out, &payload)?;
        }
    }
    Ok(())
}
