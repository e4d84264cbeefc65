//! Command-line surface: Meshulam-function tables, equality-case
//! enumeration and classification, rank decompositions of extracted
//! Fourier blocks, prime-matrix minor checks, and the verification suites.
//!
//! Exit codes: 0 success, 1 usage error, 2 mathematical invariant
//! violation or failed verification.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use meshulam_core::equality::{
    classify, family_group, EqualityCaseDescriptor, FamilyParams, OtherFactor,
};
use meshulam_core::function::{GroupFunction, WireFunction};
use meshulam_core::group::{FiniteAbelianGroup, GroupElement};
use meshulam_core::rankdec::{
    chebotarev_check, decompose_rank_one, extract_matrix, rank_extracted, verify_decomposition,
};
use meshulam_core::theta::{
    enumerate_e0, theta_oracle_profile, ThetaProfile, MAX_ORACLE_CAP,
};
use meshulam_core::verify::{run_suite, Suite, SuiteConfig, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "meshulam",
    version,
    about = "Exact uncertainty-principle computations on finite Abelian groups",
    long_about = "Computes Meshulam's function theta(k, G) by closed form and by \
exhaustive oracle, enumerates and classifies minimal-spectrum equality cases, and \
builds verified rank-one decompositions of extracted Fourier submatrices. All \
mathematical decisions run in exact cyclotomic arithmetic.\n\n\
Group specs follow the grammar Z<n> joined by `x`, each n a prime power, e.g. \
Z5, Z9, Z2xZ5. Element and character sets are given as comma-separated indices \
into the lexicographic enumeration of the group (first coordinate most \
significant)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format
    #[arg(long, global = true, default_value = "text", value_parser = ["text", "json", "csv"])]
    format: String,
    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores); results are byte-identical
    /// regardless of this setting
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the randomized property suites
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Group-order cap for exhaustive searches (max 25)
    #[arg(long, global = true, env = "FAG_ORACLE_CAP", default_value_t = meshulam_core::theta::DEFAULT_ORACLE_CAP)]
    oracle_cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Table of theta(k, G) with the oracle cross-check and the Meshulam
    /// bound
    Theta {
        /// Group spec, e.g. Z2xZ5
        group: String,
        /// Also count the equality cases per k (runs the exhaustive
        /// enumeration; slow on the largest groups)
        #[arg(long)]
        count_cases: bool,
    },
    /// Enumerate E_0(k, theta(k)): every exactly-realized
    /// (support, spectrum) pair with its kernel line and classification
    Enumerate {
        group: String,
        #[arg(long)]
        k: u64,
    },
    /// Classify a serialized function (JSON wire format) against the
    /// canonical equality-case families
    Classify {
        group: String,
        /// Path to the function in wire JSON; `-` for stdin
        #[arg(long)]
        input: String,
    },
    /// Extract M_{A,B}, report its exact rank, and when rank = |A|-1
    /// produce the verified rank-one block decomposition
    Decompose {
        group: String,
        /// Support A: comma-separated element indices
        #[arg(long = "A", value_name = "LIST")]
        a: String,
        /// Spectrum B: comma-separated character indices
        #[arg(long = "B", value_name = "LIST")]
        b: String,
    },
    /// Exhaustive nonvanishing check of Fourier-matrix minors over Z_p
    Chebotarev {
        #[arg(long)]
        p: u64,
        /// Largest minor size (default: p)
        #[arg(long)]
        max_minor: Option<usize>,
    },
    /// Run a verification suite
    Verify {
        /// One of: families, chebotarev, duality, transforms, all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Groups for the duality suite
        groups: Vec<String>,
        /// Restrict suite groups to at most this order
        #[arg(long)]
        max_order: Option<u64>,
        /// Prime for the chebotarev suite
        #[arg(long)]
        p: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap's help/version go to stdout with success
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    if cli.common.oracle_cap > MAX_ORACLE_CAP {
        eprintln!("--oracle-cap must be at most {MAX_ORACLE_CAP}");
        return ExitCode::from(1);
    }
    if let Some(jobs) = cli.common.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Debug)]
struct CliError {
    message: String,
    usage: bool,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            usage: true,
        }
    }
    fn math(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            usage: false,
        }
    }
    fn exit_code(&self) -> u8 {
        if self.usage {
            1
        } else {
            2
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

fn emit(common: &Common, text: String) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::usage(format!("stdout: {e}")))
        }
    }
}

fn parse_group_arg(spec: &str) -> Result<FiniteAbelianGroup, CliError> {
    FiniteAbelianGroup::from_str(spec).map_err(|e| CliError::usage(e.to_string()))
}

fn parse_index_list(
    text: &str,
    group: &FiniteAbelianGroup,
) -> Result<Vec<GroupElement>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let idx: u64 = part
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad index `{part}`")))?;
        if idx >= group.order() {
            return Err(CliError::usage(format!(
                "index {idx} out of range for {group}"
            )));
        }
        out.push(group.element_at(idx));
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Theta { group, count_cases } => cmd_theta(&cli.common, group, *count_cases),
        Command::Enumerate { group, k } => cmd_enumerate(&cli.common, group, *k),
        Command::Classify { group, input } => cmd_classify(&cli.common, group, input),
        Command::Decompose { group, a, b } => cmd_decompose(&cli.common, group, a, b),
        Command::Chebotarev { p, max_minor } => cmd_chebotarev(&cli.common, *p, *max_minor),
        Command::Verify {
            suite,
            groups,
            max_order,
            p,
        } => cmd_verify(&cli.common, suite, groups, *max_order, *p),
    }
}

fn cmd_theta(common: &Common, spec: &str, count_cases: bool) -> Result<ExitCode, CliError> {
    let group = parse_group_arg(spec)?;
    let profile =
        ThetaProfile::compute(&group, common.oracle_cap).map_err(|e| CliError::math(e.to_string()))?;
    let oracle = if group.order() <= common.oracle_cap {
        Some(
            theta_oracle_profile(&group, common.oracle_cap)
                .map_err(|e| CliError::math(e.to_string()))?,
        )
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut mismatch = None;
    for k in 1..=group.order() {
        let closed = profile.theta(k);
        let oracle_val = oracle.as_ref().map(|o| o[(k - 1) as usize]);
        if let Some(ov) = oracle_val {
            if ov != closed {
                mismatch = Some(json!({
                    "group": group.to_string(),
                    "k": k,
                    "theta_closed": closed,
                    "theta_oracle": ov,
                }));
            }
        }
        let count = if count_cases && group.order() <= common.oracle_cap {
            Some(
                enumerate_e0(k, closed, &group, common.oracle_cap)
                    .map_err(|e| CliError::math(e.to_string()))?
                    .len() as u64,
            )
        } else {
            None
        };
        rows.push(json!({
            "group": group.to_string(),
            "k": k,
            "theta_closed": closed,
            "method": format!("{:?}", profile.method(k)),
            "theta_oracle": oracle_val,
            "u_bound": profile.meshulam(k).to_string(),
            "equality_exists": profile.predicted_equality_cases(k),
            "equality_cases_count": count,
        }));
    }
    let text = match common.format.as_str() {
        "json" => serde_json::to_string_pretty(&rows).unwrap() + "\n",
        "csv" => {
            let mut s = String::from(
                "group,k,theta_closed,theta_oracle,u_bound,equality_exists,equality_cases_count\n",
            );
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r["group"].as_str().unwrap(),
                    r["k"],
                    r["theta_closed"],
                    r["theta_oracle"]
                        .as_u64()
                        .map_or(String::new(), |v| v.to_string()),
                    r["u_bound"].as_str().unwrap(),
                    r["equality_exists"],
                    r["equality_cases_count"]
                        .as_u64()
                        .map_or(String::new(), |v| v.to_string()),
                ));
            }
            s
        }
        _ => {
            let mut s = format!("theta(k, {group})\n");
            s.push_str("  k  theta  oracle  u(k)        cases\n");
            for r in &rows {
                s.push_str(&format!(
                    "{:>3}  {:>5}  {:>6}  {:<10}  {}{}\n",
                    r["k"].as_u64().unwrap(),
                    r["theta_closed"].as_u64().unwrap(),
                    r["theta_oracle"]
                        .as_u64()
                        .map_or("-".to_string(), |v| v.to_string()),
                    r["u_bound"].as_str().unwrap(),
                    if r["equality_exists"].as_bool().unwrap() {
                        "yes"
                    } else {
                        "no"
                    },
                    r["equality_cases_count"]
                        .as_u64()
                        .map_or(String::new(), |v| format!(" ({v})")),
                ));
            }
            s
        }
    };
    emit(common, text)?;
    if let Some(m) = mismatch {
        eprintln!("{}", serde_json::to_string(&m).unwrap());
        return Err(CliError::math(
            "oracle and closed-form theta disagree".to_string(),
        ));
    }
    Ok(ExitCode::SUCCESS)
}

fn family_params_json(group: &FiniteAbelianGroup, params: &FamilyParams) -> serde_json::Value {
    let other_json = |o: &OtherFactor| match o {
        OtherFactor::Dirac(a) => json!({"dirac": a}),
        OtherFactor::Character(c) => json!({"character": c}),
    };
    match params {
        FamilyParams::ZpGeneric { base } => json!({"base": base.to_wire()}),
        FamilyParams::TwoPrimeTensor {
            g_axis,
            g,
            other,
            exceptional_form,
        } => json!({
            "g_axis": g_axis,
            "g": g.to_wire(),
            "other": other_json(other),
            "exceptional_form": exceptional_form,
        }),
        FamilyParams::VecAm { m, g, other } => json!({
            "m": [m.m1, m.m2],
            "g": g.to_wire(),
            "other": other_json(other),
        }),
        FamilyParams::VecSplit { u, v, g, other } => json!({
            "u": u.coords(),
            "v": v.coords(),
            "g": g.to_wire(),
            "other": other_json(other),
        }),
        FamilyParams::PsqCoset { g, shift } => json!({"g": g.to_wire(), "shift": shift}),
        FamilyParams::PsqChar { chi_mod, g } => json!({"chi_mod": chi_mod, "g": g.to_wire()}),
        FamilyParams::DiffPair { x, y, chi, alpha } => json!({
            "x": group.index_of(x),
            "y": group.index_of(y),
            "chi": group.index_of(chi),
            "alpha": alpha
                .coeffs()
                .iter()
                .map(|q| [q.numer().to_string(), q.denom().to_string()])
                .collect::<Vec<_>>(),
        }),
    }
}

fn descriptor_json(d: &EqualityCaseDescriptor) -> serde_json::Value {
    json!({
        "family": d.family,
        "k": d.k,
        "group": d.group.to_string(),
        "params": family_params_json(&d.group, &d.params),
    })
}

fn cmd_enumerate(common: &Common, spec: &str, k: u64) -> Result<ExitCode, CliError> {
    let group = parse_group_arg(spec)?;
    if k == 0 || k > group.order() {
        return Err(CliError::usage(format!("k must be in 1..={}", group.order())));
    }
    let profile =
        ThetaProfile::compute(&group, common.oracle_cap).map_err(|e| CliError::math(e.to_string()))?;
    let l = profile.theta(k);
    let entries = enumerate_e0(k, l, &group, common.oracle_cap)
        .map_err(|e| CliError::math(e.to_string()))?;
    let mut listing = Vec::new();
    let mut classify_failures = 0;
    for e in &entries {
        let classification = match classify(&e.representative) {
            Ok(Some(d)) => Some(descriptor_json(&d)),
            Ok(None) => {
                classify_failures += 1;
                None
            }
            Err(err) => {
                classify_failures += 1;
                Some(json!({"error": err.to_string()}))
            }
        };
        listing.push(json!({
            "support": e.pair.a.iter().map(|x| group.index_of(x)).collect::<Vec<_>>(),
            "spectrum": e.pair.b.iter().map(|x| group.index_of(x)).collect::<Vec<_>>(),
            "representative": e.representative.to_wire(),
            "classification": classification,
        }));
    }
    let report = json!({
        "group": group.to_string(),
        "k": k,
        "theta": l,
        "count": entries.len(),
        "entries": listing,
    });
    let text = match common.format.as_str() {
        "text" => format!(
            "E0({k}, {l}) on {group}: {} pairs{}\n",
            entries.len(),
            if classify_failures > 0 {
                format!(" ({classify_failures} classification failures)")
            } else {
                String::new()
            }
        ),
        _ => serde_json::to_string_pretty(&report).unwrap() + "\n",
    };
    emit(common, text)?;
    if classify_failures > 0 {
        return Err(CliError::math(format!(
            "{classify_failures} representatives failed to classify"
        )));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(common: &Common, spec: &str, input: &str) -> Result<ExitCode, CliError> {
    let group = parse_group_arg(spec)?;
    let text = if input == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::usage(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| CliError::usage(format!("cannot read {input}: {e}")))?
    };
    let wire: WireFunction =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("bad JSON: {e}")))?;
    let f = GroupFunction::from_wire(&wire).map_err(|e| CliError::usage(e.to_string()))?;
    if f.group() != &group {
        return Err(CliError::usage(format!(
            "function lives on {}, not {group}",
            f.group()
        )));
    }
    if f.is_zero() {
        return Err(CliError::usage("the zero function has no classification"));
    }
    let outcome = classify(&f).map_err(|e| CliError::math(e.to_string()))?;
    let report = match &outcome {
        Some(d) => json!({"extremal": true, "descriptor": descriptor_json(d)}),
        None => json!({"extremal": false}),
    };
    emit(
        common,
        serde_json::to_string_pretty(&report).unwrap() + "\n",
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_decompose(common: &Common, spec: &str, a: &str, b: &str) -> Result<ExitCode, CliError> {
    let group = parse_group_arg(spec)?;
    let a_elems = parse_index_list(a, &group)?;
    let b_elems = parse_index_list(b, &group)?;
    let m = extract_matrix(&a_elems, &b_elems, &group).map_err(|e| CliError::usage(e.to_string()))?;
    let rank = rank_extracted(&m).map_err(|e| CliError::math(e.to_string()))?;
    let k = m.col_elems().len();
    let mut report = json!({
        "group": group.to_string(),
        "A": m.col_elems(),
        "B": b_elems.iter().map(|e| group.index_of(e)).collect::<BTreeSet<_>>(),
        "rows": m.row_chars(),
        "rank": rank,
    });
    let text_extra = if rank == k {
        report["decomposition"] = json!("full rank; no decomposition required");
        "full rank; no decomposition required".to_string()
    } else if family_group(&group).is_some() {
        let d = decompose_rank_one(&a_elems, &b_elems, &group)
            .map_err(|e| CliError::math(e.to_string()))?;
        if !verify_decomposition(&m, &d) {
            return Err(CliError::math(
                "constructed decomposition failed verification".to_string(),
            ));
        }
        let line = format!("{} rank-one blocks, verified", d.blocks.len());
        report["decomposition"] = json!({
            "blocks": d.blocks,
            "verified": true,
            // blocks are indexed in the original coordinates, so the
            // normalization mapping back to (A, B) is the identity
            "normalization": {"translate": 0, "modulate": 0},
        });
        line
    } else {
        report["decomposition"] =
            json!("group outside the decomposition families; rank reported only");
        "rank-deficient, group outside the decomposition families".to_string()
    };
    let text = match common.format.as_str() {
        "text" => format!(
            "M_(A,B) on {group}: {} rows x {} cols, rank {rank} ({})\n",
            m.row_chars().len(),
            k,
            text_extra
        ),
        _ => serde_json::to_string_pretty(&report).unwrap() + "\n",
    };
    emit(common, text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_chebotarev(
    common: &Common,
    p: u64,
    max_minor: Option<usize>,
) -> Result<ExitCode, CliError> {
    if ![2, 3, 5, 7, 11, 13].contains(&p) {
        return Err(CliError::usage("p must be a prime at most 13"));
    }
    let size = max_minor.unwrap_or(p as usize).min(p as usize);
    let r = chebotarev_check(p, size);
    let text = match common.format.as_str() {
        "text" => format!(
            "Z_{p}: {} minors up to size {size}: {}\n",
            r.minors_checked,
            if r.all_nonzero {
                "all nonzero"
            } else {
                "VANISHING MINOR FOUND"
            }
        ),
        _ => serde_json::to_string_pretty(&r).unwrap() + "\n",
    };
    emit(common, text)?;
    if !r.all_nonzero {
        return Err(CliError::math(format!(
            "vanishing minor at {:?}",
            r.witness
        )));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    common: &Common,
    suite: &str,
    group_specs: &[String],
    max_order: Option<u64>,
    p: Option<u64>,
) -> Result<ExitCode, CliError> {
    let suite: Suite = suite.parse().map_err(CliError::usage)?;
    let mut groups = Vec::new();
    for s in group_specs {
        groups.push(parse_group_arg(s)?);
    }
    if suite == Suite::Duality && groups.is_empty() {
        groups = meshulam_core::verify::ORACLE_GROUPS
            .iter()
            .map(|s| FiniteAbelianGroup::from_str(s).unwrap())
            .collect();
    }
    if let Some(cap) = max_order {
        groups.retain(|g| g.order() <= cap);
    }
    let config = SuiteConfig {
        cap: common.oracle_cap,
        seed: common.seed,
        chebotarev_p: p,
        groups,
    };
    let report = run_suite(suite, &config);
    let text = match common.format.as_str() {
        "json" => serde_json::to_string_pretty(&report).unwrap() + "\n",
        _ => {
            let mut s = String::new();
            for r in &report.results {
                s.push_str(&format!(
                    "{}: {} ({})\n",
                    r.id,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.details
                ));
            }
            s
        }
    };
    emit(common, text)?;
    if !report.all_pass() {
        return Err(CliError::math("verification suite failed".to_string()));
    }
    Ok(ExitCode::SUCCESS)
}
