//! `polyscan` command-line tool.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use polyscan::catalog;
use polyscan::characters::{
    dixon_table, frobenius_schur, import_table, induced_trivial, polytopal_constituents, CharacterTable, DixonOptions,
    FusionOptions,
};
use polyscan::conjugacy::{conjugacy_classes, involution_classes, largest_involution_class, ClassOptions, ClassTable};
use polyscan::io::{parse_group_file, parse_permutation_list, write_character_table, ClassListing};
use polyscan::stringc::{
    intersection_condition, is_string_c_rep, search_rank3, vertex_stabilizer, IntersectionBudget, IntersectionMode,
    RepOptions, S2Selector, SearchOptions, StringGenerators,
};
use polyscan::{Error, PermGroup};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(
    name = "polyscan",
    version,
    about = "Permutation groups, character tables and string C-group representations"
)]
struct Cli {
    /// Random seed; results are reproducible for a fixed seed.
    #[arg(long, global = true, env = "POLYSCAN_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads. Output does not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Random elements drawn by the class search before giving up.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    element_budget: u64,
    /// Largest subgroup listed element by element in intersection checks.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    intersection_budget: u64,
    /// Largest group order for computing character tables.
    #[arg(long, global = true, default_value_t = 200_000)]
    dixon_max_order: u64,
    /// Print timings to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArg {
    /// Generator file, or `catalog:NAME` for a built-in group.
    group: String,
}

#[derive(Args)]
struct TableArgs {
    /// Character table file to import instead of computing one.
    #[arg(long = "import")]
    import: Option<PathBuf>,
    /// 1-based group class for each class of the imported table, comma separated.
    #[arg(long)]
    class_map: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the group order.
    Order(GroupArg),
    /// List conjugacy classes.
    Classes {
        #[command(flatten)]
        group: GroupArg,
        /// Only classes of involutions, smallest first.
        #[arg(long)]
        involutions: bool,
        #[arg(long)]
        json: bool,
    },
    /// Search for rank-3 string C-group representations.
    SearchRank3 {
        #[command(flatten)]
        group: GroupArg,
        /// 1-based class of s0; defaults to the largest involution class.
        #[arg(long)]
        s0_class: Option<usize>,
        /// 1-based class of s2 in the centralizer of s0. By default every
        /// involution class of maximal size is tried.
        #[arg(long)]
        s2_class: Option<usize>,
        /// Check only the rank-2 and rank-1 pairs of the intersection condition.
        #[arg(long)]
        fast: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a generating tuple.
    Verify {
        #[command(flatten)]
        group: GroupArg,
        /// Generators separated by `;`, e.g. "(1,2);(2,3);(3,4)".
        #[arg(long)]
        gens: String,
        #[arg(long)]
        json: bool,
    },
    /// Compute or import a character table.
    Chartab {
        /// Generator file or `catalog:NAME`; optional with --import.
        group: Option<String>,
        #[command(flatten)]
        table: TableArgs,
        /// Write the table as JSON to this path.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Frobenius–Schur indicators.
    Indicators {
        group: Option<String>,
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        json: bool,
    },
    /// Irreducible constituents of the permutation character on a vertex stabilizer.
    Polytopal {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        gens: String,
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Negative(String),
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn exit_code(e: &Error) -> u8 {
    if e.is_budget() {
        3
    } else if e.is_consistency() {
        4
    } else {
        2
    }
}

struct Ctx {
    seed: u64,
    verbose: bool,
    element_budget: u64,
    intersection_budget: u64,
    dixon_max_order: u64,
}

impl Ctx {
    fn class_options(&self) -> ClassOptions {
        ClassOptions {
            seed: self.seed,
            element_budget: self.element_budget,
            ..ClassOptions::default()
        }
    }

    fn rep_options(&self, mode: IntersectionMode) -> RepOptions {
        RepOptions {
            mode,
            budget: IntersectionBudget {
                max_elements: self.intersection_budget,
            },
            seed: self.seed,
        }
    }

    fn timed<T>(&self, what: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        if self.verbose {
            eprintln!("{what}: {:.2?}", t.elapsed());
        }
        out
    }

    fn load_group(&self, arg: &str) -> Result<PermGroup, Error> {
        let gens = match arg.strip_prefix("catalog:") {
            Some(name) => catalog::lookup(name)?.generators,
            None => parse_group_file(&read(Path::new(arg))?)?.generators,
        };
        Ok(self.timed("group", || PermGroup::new(gens, self.seed)))
    }

    fn classes<'g>(&self, g: &'g PermGroup) -> Result<ClassTable<'g>, Error> {
        self.timed("classes", || conjugacy_classes(g, &self.class_options()))
    }

    fn table(&self, classes: &ClassTable<'_>, args: &TableArgs) -> Result<CharacterTable, Error> {
        match &args.import {
            Some(path) => {
                let mapping = args.class_map.as_deref().map(parse_class_map).transpose()?;
                import_table(&read(path)?, classes, mapping.as_deref())
            }
            None => self.timed("character table", || {
                dixon_table(
                    classes,
                    &DixonOptions {
                        max_order: self.dixon_max_order,
                        ..DixonOptions::default()
                    },
                )
            }),
        }
    }

    /// A table from a group file, an import aligned with a group, or a bare import.
    fn any_table(&self, group: Option<&str>, args: &TableArgs) -> Result<CharacterTable, Error> {
        match (group, &args.import) {
            (Some(g), _) => {
                let g = self.load_group(g)?;
                let classes = self.classes(&g)?;
                self.table(&classes, args)
            }
            (None, Some(path)) => polyscan::io::parse_character_table(&read(path)?),
            (None, None) => Err(Error::Format("give a group or --import".into())),
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn parse_class_map(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .ok()
                .filter(|&i| i >= 1)
                .map(|i| i - 1)
                .ok_or_else(|| Error::Format(format!("bad class number `{x}` in --class-map")))
        })
        .collect()
}

fn emit(value: &serde_json::Value) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn class_index(one_based: usize, len: usize) -> Result<usize, Error> {
    if one_based == 0 || one_based > len {
        return Err(Error::AmbiguousSelection(format!(
            "class {one_based} out of range 1..={len}"
        )));
    }
    Ok(one_based - 1)
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx {
        seed: cli.seed,
        verbose: cli.verbose,
        element_budget: cli.element_budget,
        intersection_budget: cli.intersection_budget,
        dixon_max_order: cli.dixon_max_order,
    };
    match cli.command {
        Command::Order(g) => {
            println!("{}", ctx.load_group(&g.group)?.order());
        }
        Command::Classes {
            group,
            involutions,
            json,
        } => {
            let g = ctx.load_group(&group.group)?;
            let t = ctx.classes(&g)?;
            let mut listing = ClassListing::from_table(&t);
            if involutions {
                let keep: Vec<usize> = involution_classes(&t).iter().map(|c| c.index).collect();
                listing.classes = keep.iter().map(|&i| listing.classes[i].clone()).collect();
            }
            if json {
                println!("{}", polyscan::io::write_class_listing(&listing));
            } else {
                println!(
                    "{:>5} {:>6} {:>14} {:>6}  representative",
                    "class", "order", "size", "square"
                );
                for c in &listing.classes {
                    println!(
                        "{:>5} {:>6} {:>14} {:>6}  {}",
                        c.index + 1,
                        c.element_order,
                        c.size,
                        c.square_index + 1,
                        c.representative
                    );
                }
            }
        }
        Command::SearchRank3 {
            group,
            s0_class,
            s2_class,
            fast,
            report,
        } => {
            let g = ctx.load_group(&group.group)?;
            let t = ctx.classes(&g)?;
            let mode = if fast {
                IntersectionMode::Rank3Fast
            } else {
                IntersectionMode::Full
            };
            let opts = SearchOptions {
                rep: ctx.rep_options(mode),
                classes: ctx.class_options(),
                ..SearchOptions::default()
            };
            let r = if involution_classes(&t).is_empty() && s0_class.is_none() {
                None
            } else {
                let s0 = match s0_class {
                    Some(i) => class_index(i, t.len())?,
                    None => largest_involution_class(&t)?,
                };
                let s2 = match s2_class {
                    Some(i) => S2Selector::Class(
                        i.checked_sub(1)
                            .ok_or_else(|| Error::AmbiguousSelection("class numbers start at 1".into()))?,
                    ),
                    None => S2Selector::LargestInvolutionClasses,
                };
                Some(ctx.timed("search", || search_rank3(&group.group, &t, s0, &s2, &opts))?)
            };
            let text = match &r {
                Some(r) => r.to_json(),
                None => serde_json::to_string(&json!({
                    "format": polyscan::stringc::REPORT_FORMAT,
                    "group": group.group,
                    "group_order": g.order().to_string(),
                    "seed": ctx.seed,
                    "candidates": [],
                    "representations": [],
                    "histogram": {},
                }))
                .expect("serializable"),
            };
            if let Some(r) = &r {
                eprintln!(
                    "{} candidates, {} representations up to conjugacy",
                    r.candidates.len(),
                    r.representations.len()
                );
                for (ty, n) in &r.histogram {
                    eprintln!("  {ty}: {n}");
                }
            } else {
                eprintln!("no involutions; nothing to search");
            }
            match report {
                Some(path) => {
                    std::fs::write(&path, text + "\n").map_err(|e| Error::Format(format!("{}: {e}", path.display())))?
                }
                None => println!("{text}"),
            }
        }
        Command::Verify { group, gens, json } => {
            let g = ctx.load_group(&group.group)?;
            let gens = parse_permutation_list(&gens)?;
            let opts = ctx.rep_options(IntersectionMode::Full);
            let rep = is_string_c_rep(&g, gens.clone(), &opts)?;
            let sg = StringGenerators::new(&g, gens)?;
            let cert = intersection_condition(&g, &sg, IntersectionMode::Full, &opts.budget, ctx.seed)?;
            let checks: Vec<serde_json::Value> = cert
                .checks
                .iter()
                .map(|c| serde_json::to_value(c).expect("serializable"))
                .collect();
            let value = json!({
                "type": rep.schlafli.to_string(),
                "generates_full_group": rep.generates_full_group,
                "verified": rep.verified,
                "checks": checks,
                "violation": cert.violation.as_ref().map(|v| json!({
                    "left": v.left, "right": v.right, "witness": v.witness.to_string()
                })),
            });
            if json {
                emit(&value);
            } else {
                println!("type {}", rep.schlafli);
                println!("generates the group: {}", rep.generates_full_group);
                println!(
                    "intersection condition: {}",
                    if rep.verified { "holds" } else { "fails" }
                );
                if let Some(v) = &cert.violation {
                    println!(
                        "  witness {} lies in <{:?}> and <{:?}> but not their common part",
                        v.witness, v.left, v.right
                    );
                }
            }
            if !(rep.verified && rep.generates_full_group) {
                return Err(Failure::Negative(
                    "not a string C-group representation of the group".into(),
                ));
            }
        }
        Command::Chartab { group, table, export } => {
            let t = ctx.any_table(group.as_deref(), &table)?;
            let text = write_character_table(&t)?;
            match export {
                Some(path) => {
                    std::fs::write(&path, text + "\n").map_err(|e| Error::Format(format!("{}: {e}", path.display())))?
                }
                None => {
                    for (i, row) in t.irreducibles().iter().enumerate() {
                        let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                        println!("X.{:<4} {}", i + 1, vals.join(" "));
                    }
                }
            }
        }
        Command::Indicators { group, table, json } => {
            let t = ctx.any_table(group.as_deref(), &table)?;
            let r = frobenius_schur(&t)?;
            if json {
                emit(&json!({
                    "indicators": r.indicators,
                    "degrees": r.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    "quaternionic": r.quaternionic().iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "weighted_sum": r.weighted_sum.to_string(),
                    "square_roots_of_one": r.square_roots_of_one.to_string(),
                }));
            } else {
                for (i, (d, n)) in r.degrees.iter().zip(&r.indicators).enumerate() {
                    println!("X.{:<4} degree {:>12}  indicator {:>2}", i + 1, d, n);
                }
                println!("characters with indicator -1: {}", r.quaternionic().len());
            }
            if !r.identity_holds() {
                return Err(Failure::Error(Error::Consistency(
                    "indicator sum does not match the number of square roots of 1".into(),
                )));
            }
        }
        Command::Polytopal {
            group,
            gens,
            table,
            json,
        } => {
            let g = ctx.load_group(&group.group)?;
            let gens = parse_permutation_list(&gens)?;
            let rep = is_string_c_rep(&g, gens, &ctx.rep_options(IntersectionMode::Full))?;
            if !(rep.verified && rep.generates_full_group) {
                return Err(Failure::Negative(
                    "generators do not give a string C-group representation".into(),
                ));
            }
            let classes = ctx.classes(&g)?;
            let t = ctx.table(&classes, &table)?;
            let h = vertex_stabilizer(&g, &rep, ctx.seed)?;
            let fusion = FusionOptions {
                classes: ctx.class_options(),
                ..FusionOptions::default()
            };
            let psi = ctx.timed("permutation character", || induced_trivial(&t, &classes, &h, &fusion))?;
            let cons = polytopal_constituents(&t, &psi)?;
            let all_polytopal = cons.iter().all(|c| c.index == t.trivial_index() || c.is_polytopal());
            let quaternionic: Vec<&_> = cons.iter().filter(|c| c.indicator == -1 && c.is_polytopal()).collect();
            if json {
                emit(&json!({
                    "type": rep.schlafli.to_string(),
                    "vertex_stabilizer_order": h.order().to_string(),
                    "constituents": cons.iter().map(|c| json!({
                        "character": c.index + 1,
                        "degree": c.degree.to_string(),
                        "multiplicity": c.multiplicity.to_string(),
                        "indicator": c.indicator,
                    })).collect::<Vec<_>>(),
                    "all_nontrivial_polytopal": all_polytopal,
                    "polytopal_with_indicator_minus_one": quaternionic.iter().map(|c| c.index + 1).collect::<Vec<_>>(),
                }));
            } else {
                println!("type {}, vertex stabilizer of order {}", rep.schlafli, h.order());
                for c in &cons {
                    println!(
                        "X.{:<4} degree {:>12}  multiplicity {:>8}  indicator {:>2}",
                        c.index + 1,
                        c.degree,
                        c.multiplicity,
                        c.indicator
                    );
                }
                println!(
                    "every nontrivial irreducible is polytopal: {}",
                    if all_polytopal { "yes" } else { "no" }
                );
            }
            if !quaternionic.is_empty() {
                let list: Vec<String> = quaternionic
                    .iter()
                    .map(|c| format!("X.{} (degree {})", c.index + 1, c.degree))
                    .collect();
                eprintln!("polytopal characters with indicator -1: {}", list.join(", "));
                if !json {
                    println!("polytopal characters with indicator -1: {}", list.join(", "));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build();
    let outcome = match pool {
        Ok(pool) => pool.install(|| run(cli)),
        Err(e) => Err(Failure::Error(Error::Format(format!("thread pool: {e}")))),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
