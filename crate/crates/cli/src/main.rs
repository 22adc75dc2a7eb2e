//! Command-line driver: load instance files, classify covers, extend
//! diagrams over their down-set lattices, test gluing along covers,
//! reproduce the built-in counterexample, sweep the gluing guarantee
//! over all small posets, and search instances for refinement witnesses.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use poset_cosheaf_cli::format::{
    build_category, cover_block, load_validated, open_diagram_block, plain_diagram_block,
    poset_block, save, CliError, InstanceFile, Loaded, LoadedDiagram,
};
use poset_cosheaf::{
    cosheaf_arrow, enumerate_labeled, falsify_refinement, figure1, random_diagram, CoverClass,
    Diagram, DownSetLattice, FalsifyBounds, FinitePoset, Hat, OpenDiagram, TheoremFailure,
    TheoremVerifier, DEFAULT_MAX_LATTICE,
};

#[derive(Parser)]
#[command(name = "poset-cosheaf", version, about = "gluing checks for diagrams on finite posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a named cover: cover, pairwise-intersection, basic, and
    /// intersection-closure verdicts.
    CheckCover {
        /// Instance file with the poset and the named cover.
        #[arg(long)]
        input: PathBuf,
        /// Which cover of the instance to classify.
        #[arg(long)]
        cover: String,
    },
    /// Extend the instance's diagram over the full down-set lattice and
    /// write the extended instance.
    Kan {
        /// Instance file with a diagram on the poset itself.
        #[arg(long)]
        input: PathBuf,
        /// Where to write the extended instance.
        #[arg(long)]
        output: PathBuf,
    },
    /// Compute the colimit over a named cover and test whether the
    /// canonical arrow into the covered open is an isomorphism.
    CheckCosheaf {
        /// Instance file with a diagram (on the poset or on opens).
        #[arg(long)]
        input: PathBuf,
        /// Which cover of the instance to test.
        #[arg(long)]
        cover: String,
    },
    /// Extend seeded random diagrams on every labeled poset up to a size
    /// and check gluing on every basic cover of every open.
    VerifyTheorem {
        /// Largest poset size to sweep (all labeled posets up to this).
        #[arg(long)]
        max_elements: usize,
        /// Largest object size drawn for diagram values.
        #[arg(long)]
        max_dim: usize,
        /// Largest member count for enumerated covers.
        #[arg(long)]
        max_cover: usize,
        /// Diagrams drawn per poset.
        #[arg(long)]
        trials: usize,
        /// Seed for the diagram draws.
        #[arg(long)]
        seed: u64,
        /// Value category: `vect` or `finset`.
        #[arg(long)]
        category: String,
        /// Also write a machine-readable report with replayable failures.
        #[arg(long)]
        json_report: Option<PathBuf>,
    },
    /// Reproduce the built-in counterexample: a cover pair where the
    /// finer cover glues but the coarser one it refines does not.
    Counterexample {
        /// Which fixture to run; only `figure1` is built in.
        #[arg(long)]
        builtin: String,
    },
    /// Search an instance's opens for a cover pair where gluing holds on
    /// the finer cover and fails on the coarser one it refines.
    FalsifyRefinement {
        /// Instance file with a diagram (on the poset or on opens).
        #[arg(long)]
        input: PathBuf,
        /// Largest member count for enumerated covers.
        #[arg(long)]
        max_cover: usize,
        /// Search only covers whose pairwise intersections are unions of
        /// members.
        #[arg(long)]
        basic_only: bool,
        /// Also write the witness as a replayable instance.
        #[arg(long)]
        json_report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn yn(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn lattice_bound() -> Result<u128, CliError> {
    match std::env::var("POSET_COSHEAF_MAX_LATTICE") {
        Err(_) => Ok(DEFAULT_MAX_LATTICE),
        Ok(text) => text.parse().map_err(|_| {
            CliError::Validation(format!(
                "POSET_COSHEAF_MAX_LATTICE: `{text}` is not a lattice size"
            ))
        }),
    }
}

/// The instance's values on opens: as given when the diagram already
/// lives on opens, otherwise the extension of the plain diagram over the
/// full down-set lattice.
fn values_of(loaded: &Loaded) -> Result<OpenDiagram, CliError> {
    match &loaded.diagram {
        None => Err(CliError::Validation(
            "the instance has no diagram block".into(),
        )),
        Some(LoadedDiagram::OnOpens(values)) => Ok(values.clone()),
        Some(LoadedDiagram::Plain(diagram)) => {
            let lattice = DownSetLattice::build_bounded(&loaded.poset, lattice_bound()?)?;
            Ok(OpenDiagram::from_hat(&Hat::hat(&lattice, diagram)?))
        }
    }
}

fn named_cover<'a>(loaded: &'a Loaded, name: &str) -> Result<&'a poset_cosheaf::Cover, CliError> {
    loaded.covers.get(name).ok_or_else(|| {
        CliError::Validation(format!("the instance has no cover named `{name}`"))
    })
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    fs::write(path, text).map_err(|err| CliError::Parse(format!("{}: {err}", path.display())))
}

fn replay_instance(
    poset: &Arc<FinitePoset>,
    diagram: &Diagram,
    failure: &TheoremFailure,
) -> InstanceFile {
    InstanceFile {
        poset: poset_block(poset),
        diagram: Some(plain_diagram_block(diagram)),
        covers: BTreeMap::from([("failing".to_string(), cover_block(&failure.cover))]),
        metadata: BTreeMap::from([
            ("open".to_string(), failure.open.name()),
            ("colimit".to_string(), failure.object.describe()),
        ]),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::CheckCover { input, cover } => {
            let loaded = load_validated(&input)?;
            let cover = named_cover(&loaded, &cover)?;
            let complete = cover.is_complete()?;
            println!(
                "cover: yes, cech: {}, basic: {}, complete: {}",
                yn(cover.is_cech()),
                yn(cover.is_basic()),
                yn(complete)
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Kan { input, output } => {
            let loaded = load_validated(&input)?;
            let values = match &loaded.diagram {
                Some(LoadedDiagram::Plain(diagram)) => {
                    let lattice =
                        DownSetLattice::build_bounded(&loaded.poset, lattice_bound()?)?;
                    OpenDiagram::from_hat(&Hat::hat(&lattice, diagram)?)
                }
                Some(LoadedDiagram::OnOpens(_)) => {
                    return Err(CliError::Validation(
                        "the instance's diagram already lives on opens".into(),
                    ))
                }
                None => {
                    return Err(CliError::Validation(
                        "the instance has no diagram block".into(),
                    ))
                }
            };
            let extended = InstanceFile {
                poset: loaded.instance.poset.clone(),
                diagram: Some(open_diagram_block(&values)),
                covers: loaded.instance.covers.clone(),
                metadata: loaded.instance.metadata.clone(),
            };
            save(&extended, &output)?;
            println!(
                "extended over {} opens into {}",
                values.opens().len(),
                output.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckCosheaf { input, cover } => {
            let loaded = load_validated(&input)?;
            let values = values_of(&loaded)?;
            let cover = named_cover(&loaded, &cover)?;
            let check = cosheaf_arrow(&values, cover)?;
            let target = values
                .index_of(cover.target())
                .expect("the arrow was just built against this open");
            println!(
                "colimit: {}, target: {}, isomorphism: {}",
                check.object().describe(),
                values.diagram().object(target).describe(),
                yn(check.holds())
            );
            Ok(if check.holds() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::VerifyTheorem {
            max_elements,
            max_dim,
            max_cover,
            trials,
            seed,
            category,
            json_report,
        } => {
            let category = build_category(&category)?;
            let bound = lattice_bound()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut checks = 0usize;
            let mut replays = Vec::new();
            for n in 0..=max_elements {
                for poset in enumerate_labeled(n) {
                    let verifier = TheoremVerifier::prepare_bounded(&poset, max_cover, bound)?;
                    for _ in 0..trials {
                        let diagram = random_diagram(&mut rng, &poset, category, max_dim);
                        let report = verifier.verify(&diagram)?;
                        checks += report.checks;
                        for failure in &report.failures {
                            replays.push(replay_instance(&poset, &diagram, failure));
                        }
                    }
                }
            }
            println!("{} failures / {} checks", replays.len(), checks);
            if let Some(path) = json_report {
                let value = serde_json::json!({
                    "checks": checks,
                    "failures": replays,
                });
                write_json(&path, &value)?;
            }
            Ok(if replays.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Counterexample { builtin } => {
            if builtin != "figure1" {
                return Err(CliError::Validation(format!(
                    "unknown builtin `{builtin}`; expected `figure1`"
                )));
            }
            let report = figure1().report();
            println!(
                "dim F̂[U1]={}, dim F̂[U2]={}, dim F(X)={}; {}; {}; {}",
                report.fine_object.size(),
                report.coarse_object.size(),
                report.target_object.size(),
                if report.comparison_injective {
                    "injective"
                } else {
                    "not injective"
                },
                if report.coarse_arrow_surjective {
                    "surjective"
                } else {
                    "not surjective"
                },
                if report.composite_is_iso {
                    "composite iso"
                } else {
                    "composite not iso"
                }
            );
            Ok(if report.holds() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::FalsifyRefinement {
            input,
            max_cover,
            basic_only,
            json_report,
        } => {
            let loaded = load_validated(&input)?;
            let values = values_of(&loaded)?;
            let bounds = FalsifyBounds {
                max_members: max_cover,
                class: if basic_only {
                    CoverClass::Basic
                } else {
                    CoverClass::All
                },
            };
            match falsify_refinement(&values, &bounds)? {
                None => {
                    println!("none");
                    Ok(ExitCode::SUCCESS)
                }
                Some(witness) => {
                    let list = |cover: &poset_cosheaf::Cover| {
                        cover
                            .members()
                            .iter()
                            .map(|member| member.name())
                            .collect::<Vec<_>>()
                            .join(", ")
                    };
                    println!("witness: target {}", witness.fine.target().name());
                    println!(
                        "  fine cover glues ({}): {}",
                        witness.fine_object.describe(),
                        list(&witness.fine)
                    );
                    println!(
                        "  coarse cover fails ({}): {}",
                        witness.coarse_object.describe(),
                        list(&witness.coarse)
                    );
                    if let Some(path) = json_report {
                        let replay = InstanceFile {
                            poset: loaded.instance.poset.clone(),
                            diagram: Some(open_diagram_block(&values)),
                            covers: BTreeMap::from([
                                ("fine".to_string(), cover_block(&witness.fine)),
                                ("coarse".to_string(), cover_block(&witness.coarse)),
                            ]),
                            metadata: BTreeMap::from([
                                (
                                    "fine colimit".to_string(),
                                    witness.fine_object.describe(),
                                ),
                                (
                                    "coarse colimit".to_string(),
                                    witness.coarse_object.describe(),
                                ),
                            ]),
                        };
                        write_json(&path, &serde_json::to_value(&replay).expect("serializes"))?;
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}
