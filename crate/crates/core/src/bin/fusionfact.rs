//! Batch CLI over the fusion-ring kernel. All reports are deterministic
//! JSON on stdout; diagnostics go to stderr.
//!
//! Exit codes: 0 = computed (verdicts may be negative), 1 = input error,
//! 2 = internal invariant failure.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use fusionfact::cohomology::{self, Trivialization};
use fusionfact::constructions;
use fusionfact::factorization;
use fusionfact::fp::fp_data;
use fusionfact::io;
use fusionfact::module::{FusionModule, RawModule};
use fusionfact::ring::FusionRing;

#[derive(Parser)]
#[command(name = "fusionfact", version, about = "fusion rings, factorizations, and group-theoretical data")]
struct Cli {
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Emit compact JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Numeric tolerance for dimension comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Subring enumeration rank bound.
    #[arg(long, global = true, default_value_t = 16)]
    max_rank: usize,
    /// Subgroup enumeration order bound.
    #[arg(long, global = true, default_value_t = 200)]
    max_order: usize,
    /// Seed for the character method.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fusion ring operations.
    Ring {
        #[command(subcommand)]
        cmd: RingCmd,
    },
    /// Finite group operations.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Q/Z cochain operations.
    Cocycle {
        #[command(subcommand)]
        cmd: CocycleCmd,
    },
    /// Building rings and modules from groups and cocycles.
    Construct {
        #[command(subcommand)]
        cmd: ConstructCmd,
    },
}

#[derive(Args)]
struct RingArg {
    /// Ring source: file path, `builtin:NAME`, or `-` for stdin.
    #[arg(long)]
    ring: String,
}

#[derive(Args)]
struct GroupArg {
    /// Group source: builtin name (`S3`, `C6`, ...) or file path.
    #[arg(long)]
    group: String,
}

#[derive(Subcommand)]
enum RingCmd {
    /// Validate a ring description against the fusion-ring axioms.
    Validate(RingArg),
    /// Frobenius-Perron dimensions.
    Fpdim(RingArg),
    /// Enumerate all fusion subrings.
    Subrings(RingArg),
    /// Factorization verdict for a pair of subrings given by generators.
    Factorize {
        #[command(flatten)]
        ring: RingArg,
        /// Generators of A, comma-separated basis indices.
        a: String,
        /// Generators of C, comma-separated basis indices.
        c: String,
    },
    /// All ordered exact factorizations.
    ExactFactorizations(RingArg),
    /// Deligne product of two rings.
    Deligne {
        r1: String,
        r2: String,
    },
    /// Ring-level Deligne check for an exact pair.
    DeligneShadow {
        #[command(flatten)]
        ring: RingArg,
        a: String,
        c: String,
    },
    /// Validate a based module file over a ring.
    ValidateModule {
        /// Module file path.
        module: String,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Enumerate all subgroups.
    Subgroups(GroupArg),
    /// All ordered exact factorizations G = G1 G2.
    ExactFactorizations(GroupArg),
    /// Conjugacy classes.
    Classes(GroupArg),
    /// Double cosets L1 \ G / L2.
    DoubleCosets {
        #[command(flatten)]
        group: GroupArg,
        /// Generators of L1, comma-separated elements.
        l1: String,
        /// Generators of L2, comma-separated elements.
        l2: String,
    },
}

#[derive(Subcommand)]
enum CocycleCmd {
    /// Check the cocycle condition d(f) = 0.
    Check {
        /// Cochain source: file, `cyclic3:N:Q`, or `zero:GROUP:DEGREE`.
        #[arg(long)]
        cochain: String,
    },
    /// Restrict a cochain to a subgroup.
    Restrict {
        #[arg(long)]
        cochain: String,
        /// Generators of L in the cochain's group.
        l: String,
    },
    /// Trivialize a 3-cocycle (find psi with d(psi) = omega).
    Trivialize {
        #[arg(long)]
        cochain: String,
    },
    /// Emit the standard cyclic 3-cocycle on Z/n.
    Cyclic {
        n: usize,
        q: i64,
    },
    /// Count cohomology classes with values in (1/m)Z/Z by brute force.
    BruteClasses {
        #[command(flatten)]
        group: GroupArg,
        k: usize,
        m: i64,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Group ring Vec(G) in the ring file format.
    VecRing(GroupArg),
    /// Representation ring Rep(G) in the ring file format.
    RepRing(GroupArg),
    /// Coset module G/L over Vec(G).
    CosetModule {
        #[command(flatten)]
        group: GroupArg,
        /// Generators of L.
        l: String,
    },
    /// Simple-object dimension data of the untwisted dual category.
    GtSimples {
        #[command(flatten)]
        group: GroupArg,
        l: String,
    },
    /// Pointed classification certificate.
    PointedClassify {
        #[command(flatten)]
        group: GroupArg,
        /// 3-cocycle omega on G.
        #[arg(long)]
        omega: String,
        /// Generators of G1.
        #[arg(long)]
        g1: String,
        /// Generators of G2.
        #[arg(long)]
        g2: String,
        /// Optional prescribed omega2 on G2 (in G2's own numbering).
        #[arg(long)]
        omega2: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    let outcome = std::panic::catch_unwind(move || run(&cli));
    match outcome {
        Ok(Ok(report)) => {
            emit(&report, pretty);
            ExitCode::SUCCESS
        }
        Ok(Err(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal invariant failure".into());
            eprintln!("internal invariant failure: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(v: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(v).unwrap()
    } else {
        serde_json::to_string(v).unwrap()
    };
    println!("{text}");
}

/// Decimal string with 12 significant digits.
fn dec12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let prec = (11 - mag).max(0) as usize;
    format!("{x:.prec$}")
}

fn report(command: &str, inputs: Value, payload: Value) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), Value::String(command.into()));
    map.insert("inputs".into(), inputs);
    if let Value::Object(extra) = payload {
        for (k, v) in extra {
            map.insert(k, v);
        }
    }
    Value::Object(map)
}

fn load_ring(spec: &str) -> Result<FusionRing, String> {
    if spec == "-" {
        let mut text = String::new();
        use std::io::Read;
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| e.to_string())?;
        let file: io::RingFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        return FusionRing::validate(&file.into()).map_err(|e| e.to_string());
    }
    io::load_ring(spec).map_err(|e| e.to_string())
}

fn subring_from_spec(
    ring: &FusionRing,
    spec: &str,
) -> Result<factorization::FusionSubring, String> {
    let seeds: Vec<usize> = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    for &i in &seeds {
        if i >= ring.rank() {
            return Err(format!("basis index {i} out of range"));
        }
    }
    Ok(factorization::subring_generated(ring, &seeds))
}

fn fact_report_json(rep: &factorization::FactorizationReport<f64>) -> Value {
    json!({
        "a_support": rep.a.support,
        "c_support": rep.c.support,
        "d_support": rep.d.support,
        "ac_support": rep.ac_support,
        "fpdims": {
            "a": dec12(rep.dims.fpdim_a),
            "c": dec12(rep.dims.fpdim_c),
            "d": dec12(rep.dims.fpdim_d),
            "ac": dec12(rep.dims.fpdim_ac),
            "b": dec12(rep.dims.fpdim_b),
        },
        "is_factorization": rep.is_factorization,
        "is_exact_dim": rep.is_exact_dim,
        "is_exact_unique": rep.is_exact_unique,
        "witness": rep.witness.as_ref().map(|w| {
            w.iter().map(|&(x, y, z)| vec![x, y, z]).collect::<Vec<_>>()
        }),
        "counterexample": rep.counterexample.as_ref().map(|((x, y), dec)| {
            json!({
                "pair": [x, y],
                "decomposition": dec.iter().map(|&(k, n)| vec![k as u64, n]).collect::<Vec<_>>(),
            })
        }),
    })
}

fn run(cli: &Cli) -> Result<Value, String> {
    let tol = cli.tolerance;
    match &cli.command {
        Command::Ring { cmd } => run_ring(cli, cmd, tol),
        Command::Group { cmd } => run_group(cmd),
        Command::Cocycle { cmd } => run_cocycle(cmd),
        Command::Construct { cmd } => run_construct(cli, cmd, tol),
    }
}

fn run_ring(cli: &Cli, cmd: &RingCmd, tol: f64) -> Result<Value, String> {
    match cmd {
        RingCmd::Validate(arg) => {
            let ring = load_ring(&arg.ring)?;
            Ok(report(
                "ring validate",
                json!({"ring": arg.ring}),
                json!({
                    "valid": true,
                    "rank": ring.rank(),
                    "labels": ring.labels(),
                    "dual": ring.duals(),
                }),
            ))
        }
        RingCmd::Fpdim(arg) => {
            let ring = load_ring(&arg.ring)?;
            let fp = fp_data::<f64>(&ring, tol).map_err(|e| e.to_string())?;
            Ok(report(
                "ring fpdim",
                json!({"ring": arg.ring}),
                json!({
                    "dims": fp.dims.iter().map(|&d| dec12(d)).collect::<Vec<_>>(),
                    "ring_dim": dec12(fp.ring_dim),
                    "integral_dims": fp.integral_dims,
                }),
            ))
        }
        RingCmd::Subrings(arg) => {
            let ring = load_ring(&arg.ring)?;
            let subs = factorization::enumerate_subrings(&ring, cli.max_rank)
                .map_err(|e| e.to_string())?;
            Ok(report(
                "ring subrings",
                json!({"ring": arg.ring}),
                json!({
                    "count": subs.len(),
                    "supports": subs.iter().map(|s| &s.support).collect::<Vec<_>>(),
                }),
            ))
        }
        RingCmd::Factorize { ring: arg, a, c } => {
            let ring = load_ring(&arg.ring)?;
            let fp = fp_data::<f64>(&ring, tol).map_err(|e| e.to_string())?;
            let sa = subring_from_spec(&ring, a)?;
            let sc = subring_from_spec(&ring, c)?;
            let rep = factorization::is_exact_factorization(&ring, &fp, &sa, &sc, tol)
                .map_err(|e| e.to_string())?;
            Ok(report(
                "ring factorize",
                json!({"ring": arg.ring, "a": a, "c": c}),
                fact_report_json(&rep),
            ))
        }
        RingCmd::ExactFactorizations(arg) => {
            let ring = load_ring(&arg.ring)?;
            let fp = fp_data::<f64>(&ring, tol).map_err(|e| e.to_string())?;
            let reps =
                factorization::enumerate_exact_factorizations(&ring, &fp, cli.max_rank, tol)
                    .map_err(|e| e.to_string())?;
            Ok(report(
                "ring exact-factorizations",
                json!({"ring": arg.ring}),
                json!({
                    "count": reps.len(),
                    "pairs": reps.iter().map(fact_report_json).collect::<Vec<_>>(),
                }),
            ))
        }
        RingCmd::Deligne { r1, r2 } => {
            let a = load_ring(r1)?;
            let b = load_ring(r2)?;
            let prod = factorization::deligne_product(&a, &b).map_err(|e| e.to_string())?;
            Ok(serde_json::to_value(io::ring_to_file(&prod)).unwrap())
        }
        RingCmd::DeligneShadow { ring: arg, a, c } => {
            let ring = load_ring(&arg.ring)?;
            let fp = fp_data::<f64>(&ring, tol).map_err(|e| e.to_string())?;
            let sa = subring_from_spec(&ring, a)?;
            let sc = subring_from_spec(&ring, c)?;
            let rep = factorization::is_exact_factorization(&ring, &fp, &sa, &sc, tol)
                .map_err(|e| e.to_string())?;
            let verdict =
                factorization::deligne_shadow_check(&ring, &rep).map_err(|e| e.to_string())?;
            Ok(report(
                "ring deligne-shadow",
                json!({"ring": arg.ring, "a": a, "c": c}),
                json!({"deligne_type_at_ring_level": verdict}),
            ))
        }
        RingCmd::ValidateModule { module } => {
            let text = std::fs::read_to_string(module).map_err(|e| e.to_string())?;
            let file: io::ModuleFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let ring = match &file.ring {
                Value::String(s) => load_ring(s)?,
                inline => {
                    let rf: io::RingFile =
                        serde_json::from_value(inline.clone()).map_err(|e| e.to_string())?;
                    FusionRing::validate(&rf.into()).map_err(|e| e.to_string())?
                }
            };
            let fp = fp_data::<f64>(&ring, tol).map_err(|e| e.to_string())?;
            let raw = RawModule {
                mlabels: file.mlabels,
                action: file.action,
            };
            let m = FusionModule::validate(Arc::new(ring), &raw, &fp, tol)
                .map_err(|e| e.to_string())?;
            Ok(report(
                "ring validate-module",
                json!({"module": module}),
                json!({
                    "valid": true,
                    "mrank": m.mrank(),
                    "mdims": m.mdims.iter().map(|&d| dec12(d)).collect::<Vec<_>>(),
                }),
            ))
        }
    }
}

fn run_group(cmd: &GroupCmd) -> Result<Value, String> {
    match cmd {
        GroupCmd::Subgroups(arg) => {
            let g = io::load_group(&arg.group).map_err(|e| e.to_string())?;
            let subs = g.enumerate_subgroups().map_err(|e| e.to_string())?;
            Ok(report(
                "group subgroups",
                json!({"group": arg.group}),
                json!({
                    "order": g.order(),
                    "count": subs.len(),
                    "subgroups": subs.iter().map(|s| &s.elements).collect::<Vec<_>>(),
                }),
            ))
        }
        GroupCmd::ExactFactorizations(arg) => {
            let g = io::load_group(&arg.group).map_err(|e| e.to_string())?;
            let facts = g.exact_factorizations().map_err(|e| e.to_string())?;
            Ok(report(
                "group exact-factorizations",
                json!({"group": arg.group}),
                json!({
                    "count": facts.len(),
                    "pairs": facts.iter().map(|f| json!({
                        "g1": f.g1.elements,
                        "g2": f.g2.elements,
                        "expression_table": f.expression_table.as_ref().map(|t| {
                            t.iter().map(|(&g, &(a, b))| vec![g, a, b]).collect::<Vec<_>>()
                        }),
                    })).collect::<Vec<_>>(),
                }),
            ))
        }
        GroupCmd::Classes(arg) => {
            let g = io::load_group(&arg.group).map_err(|e| e.to_string())?;
            let classes = g.conjugacy_classes();
            Ok(report(
                "group classes",
                json!({"group": arg.group}),
                json!({
                    "count": classes.len(),
                    "classes": classes,
                }),
            ))
        }
        GroupCmd::DoubleCosets { group, l1, l2 } => {
            let g = io::load_group(&group.group).map_err(|e| e.to_string())?;
            let s1 = io::parse_subgroup(&g, l1).map_err(|e| e.to_string())?;
            let s2 = io::parse_subgroup(&g, l2).map_err(|e| e.to_string())?;
            let dc = g.double_cosets(&s1, &s2);
            Ok(report(
                "group double-cosets",
                json!({"group": group.group, "l1": s1.elements, "l2": s2.elements}),
                json!({
                    "count": dc.len(),
                    "cosets": dc.iter().map(|(rep, elems)| json!({
                        "representative": rep,
                        "elements": elems,
                    })).collect::<Vec<_>>(),
                }),
            ))
        }
    }
}

fn circle_str(c: &cohomology::Circle) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn cochain_values_json(f: &cohomology::Cochain) -> Vec<Value> {
    let n = f.group.order();
    let mut out = Vec::new();
    let mut args = vec![0usize; f.degree];
    loop {
        let v = f.get(&args);
        if !v.is_zero() {
            let mut row: Vec<Value> = args.iter().map(|&a| json!(a)).collect();
            row.push(json!(circle_str(&v)));
            out.push(Value::Array(row));
        }
        // odometer
        let mut done = true;
        for a in args.iter_mut().rev() {
            *a += 1;
            if *a < n {
                done = false;
                break;
            }
            *a = 0;
        }
        if done {
            break;
        }
    }
    out
}

fn run_cocycle(cmd: &CocycleCmd) -> Result<Value, String> {
    match cmd {
        CocycleCmd::Check { cochain } => {
            let f = io::load_cochain(cochain).map_err(|e| e.to_string())?;
            let ok = cohomology::is_cocycle(&f).map_err(|e| e.to_string())?;
            Ok(report(
                "cocycle check",
                json!({"cochain": cochain}),
                json!({"degree": f.degree, "is_cocycle": ok}),
            ))
        }
        CocycleCmd::Restrict { cochain, l } => {
            let f = io::load_cochain(cochain).map_err(|e| e.to_string())?;
            let sub = io::parse_subgroup(&f.group, l).map_err(|e| e.to_string())?;
            let (r, lg) = cohomology::restrict(&f, &sub);
            Ok(report(
                "cocycle restrict",
                json!({"cochain": cochain, "l": sub.elements}),
                json!({
                    "subgroup_order": lg.order(),
                    "degree": r.degree,
                    "values": cochain_values_json(&r),
                }),
            ))
        }
        CocycleCmd::Trivialize { cochain } => {
            let f = io::load_cochain(cochain).map_err(|e| e.to_string())?;
            match cohomology::trivialize(&f).map_err(|e| e.to_string())? {
                Trivialization::Witness(psi) => Ok(report(
                    "cocycle trivialize",
                    json!({"cochain": cochain}),
                    json!({
                        "trivial": true,
                        "psi": cochain_values_json(&psi),
                    }),
                )),
                Trivialization::Nontrivial {
                    row,
                    invariant_factor,
                    residue,
                    modulus,
                } => Ok(report(
                    "cocycle trivialize",
                    json!({"cochain": cochain}),
                    json!({
                        "trivial": false,
                        "certificate": {
                            "row": row,
                            "invariant_factor": invariant_factor.to_string(),
                            "residue": residue.to_string(),
                            "modulus": modulus,
                        },
                    }),
                )),
            }
        }
        CocycleCmd::Cyclic { n, q } => {
            let f = cohomology::cyclic_3cocycle(*n, *q);
            Ok(report(
                "cocycle cyclic",
                json!({"n": n, "q": q}),
                json!({
                    "degree": 3,
                    "group_order": n,
                    "values": cochain_values_json(&f),
                }),
            ))
        }
        CocycleCmd::BruteClasses { group, k, m } => {
            let g = io::load_group(&group.group).map_err(|e| e.to_string())?;
            let count = cohomology::brute_classes(&g, *k, *m).map_err(|e| e.to_string())?;
            Ok(report(
                "cocycle brute-classes",
                json!({"group": group.group, "k": k, "m": m}),
                json!({"classes": count.to_string()}),
            ))
        }
    }
}

fn run_construct(cli: &Cli, cmd: &ConstructCmd, tol: f64) -> Result<Value, String> {
    match cmd {
        ConstructCmd::VecRing(arg) => {
            let g = io::load_group(&arg.group).map_err(|e| e.to_string())?;
            let ring = constructions::vec_ring(&g);
            Ok(serde_json::to_value(io::ring_to_file(&ring)).unwrap())
        }
        ConstructCmd::RepRing(arg) => {
            let g = io::load_group(&arg.group).map_err(|e| e.to_string())?;
            let ring =
                constructions::rep_ring_seeded(&g, cli.seed).map_err(|e| e.to_string())?;
            Ok(serde_json::to_value(io::ring_to_file(&ring)).unwrap())
        }
        ConstructCmd::CosetModule { group, l } => {
            let g = io::load_group(&group.group).map_err(|e| e.to_string())?;
            let sub = io::parse_subgroup(&g, l).map_err(|e| e.to_string())?;
            let m = constructions::coset_module(&g, &sub).map_err(|e| e.to_string())?;
            Ok(report(
                "construct coset-module",
                json!({"group": group.group, "l": sub.elements}),
                json!({
                    "ring": serde_json::to_value(io::ring_to_file(&m.base)).unwrap(),
                    "mlabels": m.mlabels,
                    "action": m.action_entries()
                        .map(|((i, j, k), a)| vec![i as u64, j as u64, k as u64, a])
                        .collect::<Vec<_>>(),
                    "mdims": m.mdims.iter().map(|&d| dec12(d)).collect::<Vec<_>>(),
                }),
            ))
        }
        ConstructCmd::GtSimples { group, l } => {
            let g = io::load_group(&group.group).map_err(|e| e.to_string())?;
            let sub = io::parse_subgroup(&g, l).map_err(|e| e.to_string())?;
            let simples = constructions::gt_simples(&g, &sub).map_err(|e| e.to_string())?;
            let total: u64 = simples.iter().map(|s| s.fpdim * s.fpdim).sum();
            Ok(report(
                "construct gt-simples",
                json!({"group": group.group, "l": sub.elements}),
                json!({
                    "simples": simples.iter().map(|s| json!({
                        "coset_rep": s.coset_rep,
                        "stab_irrep_dim": s.stab_irrep_dim,
                        "fpdim": s.fpdim,
                    })).collect::<Vec<_>>(),
                    "sum_fpdim_squared": total,
                    "group_order": g.order(),
                }),
            ))
        }
        ConstructCmd::PointedClassify {
            group,
            omega,
            g1,
            g2,
            omega2,
        } => {
            let g = Arc::new(io::load_group(&group.group).map_err(|e| e.to_string())?);
            let w = if omega == "zero" {
                cohomology::Cochain::zero(g.clone(), 3)
            } else {
                io::load_cochain(omega).map_err(|e| e.to_string())?
            };
            if w.group.order() != g.order() {
                return Err("omega is defined on a group of different order".into());
            }
            let s1 = io::parse_subgroup(&g, g1).map_err(|e| e.to_string())?;
            let s2 = io::parse_subgroup(&g, g2).map_err(|e| e.to_string())?;
            let w2 = match omega2 {
                Some(spec) if spec == "zero" => {
                    let (lg, _) = g.subgroup_as_group(&s2);
                    Some(cohomology::Cochain::zero(Arc::new(lg), 3))
                }
                Some(spec) => Some(io::load_cochain(spec).map_err(|e| e.to_string())?),
                None => None,
            };
            let cert = constructions::pointed_classify(&g, &w, &s1, &s2, w2.as_ref())
                .map_err(|e| e.to_string())?;
            Ok(report(
                "construct pointed-classify",
                json!({"group": group.group, "omega": omega, "g1": s1.elements, "g2": s2.elements}),
                serde_json::to_value(&cert).unwrap(),
            ))
        }
    }
    .map(|v| {
        let _ = tol;
        v
    })
}
