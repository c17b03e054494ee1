//! The `so3` command line.
//!
//! Exit codes: 0 when a verdict or report was produced (including `No` and
//! `Unknown`), 1 for usage and parse errors, 2 for profiles that fail
//! validation, 3 when a reproduction disagrees with its golden file.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::charclass::{sym0_classes, Bundle5Data};
use crate::constructors::{
    catalog, circle_bundle, connected_sum, connected_sum_all, find_euler_class, hypersurface, product_3x2,
    CircleBundleSpec, ConstructError, ThreeManifoldHomology, CATALOG_NAMES, DEFAULT_SEARCH_BOUND,
};
use crate::decide::{
    decide_irreducible_so3, decide_standard_so3, decide_two_field, rank3_bundle_exists, rank5_relation_holds,
    reconstruct_rank3, Criterion, DecideError, Decision, Verdict,
};
use crate::fgab::{has_element_of_order, FgAbGroup, GroupElement};
use crate::json::{parse_document, profile_to_json, to_canonical_json, Document, ProfileJson};
use crate::topology::{Coefficients, F2Vector, ManifoldProfile, TopologyError, Violation};

pub const SEARCH_BOUND_ENV: &str = "SO3_EULER_SEARCH_BOUND";

const GOLDEN_CUBIC_BUNDLE: &str = include_str!("../golden/cubic_bundle.txt");
const GOLDEN_EXAMPLES: &str = include_str!("../golden/examples.txt");

#[derive(Parser, Debug)]
#[command(name = "so3", version, about = "Invariants and SO(3)-structure decisions for closed oriented 5-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// profile or recipe JSON file
    file: Option<PathBuf>,
    /// use a catalog profile instead of a file
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CriterionArg {
    Thomas,
    Atiyah,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Target {
    #[value(name = "prop1.7")]
    CubicBundle,
    #[value(name = "sec5")]
    Examples,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homology, semicharacteristics and cohomology of a profile
    Invariants {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Existence decisions
    Decide {
        #[command(subcommand)]
        what: DecideCommand,
    },
    /// Bundle existence checks
    Bundle {
        #[command(subcommand)]
        what: BundleCommand,
    },
    /// Built-in profiles
    Catalog {
        #[command(subcommand)]
        what: CatalogCommand,
    },
    /// Rebuild the worked examples and compare with stored expectations
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        /// print the report without comparing
        #[arg(long)]
        emit: bool,
    },
}

#[derive(Subcommand, Debug)]
enum DecideCommand {
    IrreducibleSo3 {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    TwoField {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    StandardSo3 {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum BundleCommand {
    /// Rank-3 bundle with given w2 and p1
    Rank3 {
        #[command(flatten)]
        input: Input,
        /// w2 as a 0/1 list in the fragment basis, e.g. 1,0
        #[arg(long, allow_hyphen_values = true)]
        w2: String,
        /// p1 coordinates in H^4(M;Z), free then torsion
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List,
    Show { name: String },
}

enum Failure {
    Usage(String),
    Invalid(Vec<String>),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }
}

fn invalid(v: &[Violation]) -> Failure {
    Failure::Invalid(v.iter().map(|x| x.to_string()).collect())
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::Topology(TopologyError::InvalidProfile(v)) => invalid(&v),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<DecideError> for Failure {
    fn from(e: DecideError) -> Self {
        match e {
            DecideError::InvalidProfile(v) => invalid(&v),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                0
            } else {
                let _ = write!(err, "{text}");
                1
            };
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = write!(out, "{text}");
            0
        }
        Err(f) => {
            match &f {
                Failure::Usage(m) => {
                    let _ = writeln!(err, "error: {m}");
                }
                Failure::Invalid(v) => {
                    let _ = writeln!(err, "invalid profile:");
                    for x in v {
                        let _ = writeln!(err, "  - {x}");
                    }
                }
                Failure::Mismatch(m) => {
                    let _ = write!(err, "{m}");
                }
            }
            f.code()
        }
    }
}

fn search_bound() -> Result<u32, Failure> {
    match std::env::var(SEARCH_BOUND_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEARCH_BOUND_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_SEARCH_BOUND),
    }
}

fn load(input: &Input) -> Result<ManifoldProfile, Failure> {
    if let Some(name) = &input.catalog {
        return Ok(catalog(name)?);
    }
    let path = input.file.as_ref().expect("clap enforces one input");
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    match parse_document(&text).map_err(|e| Failure::Usage(e.to_string()))? {
        Document::Recipe(r) => Ok(r.build(search_bound()?)?),
        Document::Profile(p) => {
            let v = p.validate();
            if v.is_empty() {
                Ok(*p)
            } else {
                Err(invalid(&v))
            }
        }
    }
}

fn emit_decision(d: &Decision, format: Format) -> String {
    match format {
        Format::Text => d.render(),
        Format::Json => to_canonical_json(d) + "\n",
    }
}

fn parse_list(s: &str) -> Result<Vec<BigInt>, Failure> {
    let body = s.trim().trim_start_matches('[').trim_end_matches(']');
    body.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<BigInt>().map_err(|_| Failure::Usage(format!("not an integer: {t:?}"))))
        .collect()
}

fn dispatch(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::Invariants { input, format } => {
            let p = load(&input)?;
            let r = InvariantsReport::of(&p);
            Ok(match format {
                Format::Text => r.render(),
                Format::Json => to_canonical_json(&r) + "\n",
            })
        }
        Command::Decide { what } => match what {
            DecideCommand::IrreducibleSo3 { input, format } => {
                Ok(emit_decision(&decide_irreducible_so3(&load(&input)?)?, format))
            }
            DecideCommand::TwoField {
                input,
                criterion,
                format,
            } => {
                let c = match criterion {
                    CriterionArg::Thomas => Criterion::Thomas,
                    CriterionArg::Atiyah => Criterion::Atiyah,
                };
                Ok(emit_decision(&decide_two_field(&load(&input)?, c)?, format))
            }
            DecideCommand::StandardSo3 { input, format } => {
                Ok(emit_decision(&decide_standard_so3(&load(&input)?)?, format))
            }
        },
        Command::Bundle {
            what: BundleCommand::Rank3 { input, w2, p1, format },
        } => {
            let m = load(&input)?;
            let bits = parse_list(&w2)?
                .into_iter()
                .map(|b| match b.to_string().as_str() {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(Failure::Usage(format!("w2 entries must be 0 or 1, got {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let p = GroupElement::from_coords(m.h4(), &parse_list(&p1)?).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(emit_decision(&rank3_bundle_exists(&m, &F2Vector::from_bits(&bits), &p)?, format))
        }
        Command::Catalog { what } => match what {
            CatalogCommand::List => Ok(CATALOG_NAMES.iter().map(|n| format!("{n}\n")).collect()),
            CatalogCommand::Show { name } => Ok(profile_to_json(&catalog(&name)?) + "\n"),
        },
        Command::Reproduce { target, emit } => {
            let bound = search_bound()?;
            let (report, golden) = match target {
                Target::CubicBundle => (reproduce_cubic_bundle(bound)?, GOLDEN_CUBIC_BUNDLE),
                Target::Examples => (reproduce_examples(bound)?, GOLDEN_EXAMPLES),
            };
            if emit {
                return Ok(report.text);
            }
            compare_golden(&report, golden)
        }
    }
}

/// Everything `so3 invariants --format json` prints.
#[derive(Serialize)]
pub struct InvariantsReport {
    name: String,
    homology: Vec<String>,
    spin: bool,
    w4_zero: bool,
    p1: String,
    semicharacteristic: u8,
    kervaire_semicharacteristic: u8,
    semicharacteristic_gap: u8,
    mod2_betti: Vec<usize>,
    cohomology_z: Vec<String>,
    cohomology_z2: Vec<String>,
    h4_has_element_of_order_4: bool,
    profile: ProfileJson,
}

impl InvariantsReport {
    pub fn of(p: &ManifoldProfile) -> Self {
        let coh = |c| {
            (0..=5)
                .map(|k| p.cohomology(k, c).expect("degree in range").to_string())
                .collect()
        };
        Self {
            name: p.name.clone(),
            homology: p.homology.iter().map(|g| g.to_string()).collect(),
            spin: p.spin,
            w4_zero: p.w4_zero,
            p1: p.p1.to_string(),
            semicharacteristic: p.semicharacteristic(),
            kervaire_semicharacteristic: p.kervaire_semicharacteristic(),
            semicharacteristic_gap: p.semicharacteristic_gap(),
            mod2_betti: (0..=5).map(|k| p.mod2_betti(k)).collect(),
            cohomology_z: coh(Coefficients::Integers),
            cohomology_z2: coh(Coefficients::Mod(2)),
            h4_has_element_of_order_4: has_element_of_order(&p.h4(), 4).expect("positive order"),
            profile: ProfileJson::from_profile(p),
        }
    }

    fn render(&self) -> String {
        let mut s = format!("name: {}\n", self.name);
        s.push_str(" k  H_k            H^k(M;Z)       H^k(M;Z2)\n");
        for k in 0..=5 {
            s.push_str(&format!(
                " {k}  {:<13} {:<14} {}\n",
                self.homology[k], self.cohomology_z[k], self.cohomology_z2[k]
            ));
        }
        s.push_str(&format!("spin: {}\nw4 = 0: {}\np1: {}\n", self.spin, self.w4_zero, self.p1));
        s.push_str(&format!(
            "semicharacteristic: {}\nKervaire semicharacteristic: {}\ndifference (even torsion of H2 mod 2): {}\n",
            self.semicharacteristic, self.kervaire_semicharacteristic, self.semicharacteristic_gap
        ));
        s.push_str(&format!(
            "H^4(M;Z) has an element of order 4: {}\nmod-2 fragment: {}\n",
            self.h4_has_element_of_order_4,
            if self.profile.mod2_fragment.is_some() { "present" } else { "absent" }
        ));
        s
    }
}

/// Output of a reproduction run: report text plus named checks against the
/// expected values.
struct Report {
    text: String,
    checks: Vec<(String, bool)>,
}

impl Report {
    fn new() -> Self {
        Self {
            text: String::new(),
            checks: Vec::new(),
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn expect(&mut self, name: impl Into<String>, ok: bool) {
        let name = name.into();
        self.line(format!("check {name}: {}", if ok { "pass" } else { "FAIL" }));
        self.checks.push((name, ok));
    }
}

fn compare_golden(report: &Report, golden: &str) -> Result<String, Failure> {
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
    let mut msg = String::new();
    if !failed.is_empty() {
        msg.push_str(&format!("failed checks: {}\n", failed.join(", ")));
    }
    if report.text != golden {
        let (a, b): (Vec<&str>, Vec<&str>) = (golden.lines().collect(), report.text.lines().collect());
        let i = a.iter().zip(&b).position(|(x, y)| x != y).unwrap_or(a.len().min(b.len()));
        msg.push_str(&format!(
            "output differs from golden file at line {}:\n  expected: {}\n  actual:   {}\n",
            i + 1,
            a.get(i).unwrap_or(&"<end of file>"),
            b.get(i).unwrap_or(&"<end of output>")
        ));
    }
    if msg.is_empty() {
        Ok(format!(
            "{}reproduction matches golden file ({} checks passed)\n",
            report.text,
            report.checks.len()
        ))
    } else {
        Err(Failure::Mismatch(msg))
    }
}

fn homology_line(p: &ManifoldProfile) -> String {
    let g: Vec<String> = p.homology.iter().map(|g| g.to_string()).collect();
    format!("homology: ({})", g.join(", "))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// The cubic surface, the Euler class search and the resulting circle bundle.
fn cubic_bundle_profile(r: &mut Report, bound: u32) -> Result<ManifoldProfile, Failure> {
    let base = hypersurface(3)?;
    r.line(format!(
        "hypersurface(3): b2 = {}, euler = {}, signature = {}, p1 = {}, spin = {}",
        base.b2, base.euler_char, base.signature, base.p1_eval, base.spin
    ));
    r.expect(
        "cubic surface invariants",
        (base.b2, base.euler_char, base.signature, base.p1_eval, base.spin) == (7, 9, -5, -15, false),
    );
    let u = [3, -1, -1, -1, -1, -1, -1];
    let hit = find_euler_class(&base, &u, 3, bound)?
        .ok_or_else(|| Failure::Mismatch(format!("no Euler class with torsion 3 within bound {bound}\n")))?;
    r.line(format!("search bound: {bound}"));
    r.line(format!("w = {:?}", hit.w));
    r.line(format!("c = u + w = {:?}", hit.c));
    let m = circle_bundle(&CircleBundleSpec {
        base,
        euler_class: ints(&hit.c),
    })?;
    Ok(m)
}

fn reproduce_cubic_bundle(bound: u32) -> Result<Report, Failure> {
    let mut r = Report::new();
    let m = cubic_bundle_profile(&mut r, bound)?;
    r.line(homology_line(&m));
    r.line(format!("H^4(M;Z) = {}", m.h4()));
    r.line(format!("spin: {}", m.spin));
    r.line(format!("p1(M) = {}", m.p1));
    r.line(format!("w4(M) = 0: {}", m.w4_zero));
    r.line(format!(
        "semicharacteristic = {}, Kervaire semicharacteristic = {}",
        m.semicharacteristic(),
        m.kervaire_semicharacteristic()
    ));
    r.expect("k = semicharacteristic = 1", m.semicharacteristic() == 1 && m.kervaire_semicharacteristic() == 1);
    r.expect("not spin", !m.spin);
    r.expect("p1 = 0", m.p1.is_zero());
    r.expect("w4 = 0", m.w4_zero);
    r.expect("H^4(M;Z) = Z_3", m.h4() == FgAbGroup::cyclic(3));
    r.expect(
        "no element of order 4 in H^4",
        !has_element_of_order(&m.h4(), 4).expect("positive order"),
    );
    let d = decide_irreducible_so3(&m)?;
    r.line(format!("irreducible SO(3)-structure: {} ({})", d.verdict, d.theorem));
    r.expect("irreducible verdict Yes", d.verdict == Verdict::Yes);
    let tangent = Bundle5Data::tangent(Arc::new(m.clone()));
    let rel = rank5_relation_holds(&m, &tangent)?;
    r.line(format!("rank-5 relation on the tangent bundle: {rel}"));
    r.expect("rank-5 relation holds", rel);
    let eta = reconstruct_rank3(&m)?;
    let same = eta.as_ref().is_some_and(|e| sym0_classes(e).same_classes(&tangent));
    r.line(format!(
        "rank-3 bundle eta with 5 p1(eta) = p1(M): {}",
        eta.as_ref().map_or("none".to_string(), |e| e.p1.to_string())
    ));
    r.expect("trace-free symmetric square of eta has the tangent classes", same);
    Ok(r)
}

fn verdict(p: &ManifoldProfile) -> Result<Verdict, Failure> {
    Ok(decide_irreducible_so3(p)?.verdict)
}

fn reproduce_examples(bound: u32) -> Result<Report, Failure> {
    let mut r = Report::new();

    r.line("== Wu manifold SU(3)/SO(3)");
    let wu = catalog("wu")?;
    r.line(homology_line(&wu));
    let d = decide_irreducible_so3(&wu)?;
    let a = decide_two_field(&wu, Criterion::Atiyah)?;
    r.line(format!(
        "semicharacteristic = {}, k = {}",
        wu.semicharacteristic(),
        wu.kervaire_semicharacteristic()
    ));
    r.line(format!("irreducible: {} ({})", d.verdict, d.theorem));
    r.line(format!("two-field: {} ({})", a.verdict, a.theorem));
    r.expect(
        "Wu: irreducible Yes, no two-field, k = 1, semicharacteristic 0",
        d.verdict == Verdict::Yes
            && a.verdict == Verdict::No
            && wu.kervaire_semicharacteristic() == 1
            && wu.semicharacteristic() == 0,
    );

    r.line("== Circle bundle over the cubic surface");
    let m = cubic_bundle_profile(&mut r, bound)?;
    let d = decide_irreducible_so3(&m)?;
    r.line(format!(
        "H^4 = {}, spin = {}, p1 = 0: {}, w4 = 0: {}, semicharacteristic = {}",
        m.h4(),
        m.spin,
        m.p1.is_zero(),
        m.w4_zero,
        m.semicharacteristic()
    ));
    r.line(format!("irreducible: {} ({})", d.verdict, d.theorem));
    r.expect(
        "circle bundle: irreducible with semicharacteristic 1",
        d.verdict == Verdict::Yes && m.semicharacteristic() == 1,
    );

    r.line("== Products N x S_g");
    let threes: [(&str, FgAbGroup); 6] = [
        ("S3", FgAbGroup::trivial()),
        ("S1xS2", FgAbGroup::free(1)),
        ("T3", FgAbGroup::free(3)),
        ("L(2,1)", FgAbGroup::cyclic(2)),
        ("L(3,1)", FgAbGroup::cyclic(3)),
        ("L(4,1)", FgAbGroup::cyclic(4)),
    ];
    let mut products = Vec::new();
    let mut all_yes = true;
    for (label, h1) in &threes {
        let n = ThreeManifoldHomology::from_h1(h1.clone());
        let row: Vec<String> = (0..=3)
            .map(|g| {
                let p = product_3x2(&n, g)?;
                let v = verdict(&p)?;
                all_yes &= v == Verdict::Yes && p.semicharacteristic() == 0;
                products.push(p);
                Ok(format!("g={g}:{v}"))
            })
            .collect::<Result<_, Failure>>()?;
        r.line(format!("{label:<7} {}", row.join(" ")));
    }
    r.expect("products: semicharacteristic 0 and irreducible", all_yes);
    let triple = connected_sum_all(&products[..3])?;
    let pair = connected_sum(&products[0], &products[1])?;
    r.line(format!(
        "sum of three products: {}; sum of two products: {}",
        verdict(&triple)?,
        verdict(&pair)?
    ));
    r.expect("odd sum of products is irreducible", verdict(&triple)? == Verdict::Yes);

    r.line("== S3-bundles over S2");
    for name in ["s3xs2", "s3~xs2"] {
        let p = catalog(name)?;
        let d = decide_irreducible_so3(&p)?;
        let a = decide_two_field(&p, Criterion::Atiyah)?;
        let t = Bundle5Data::tangent(Arc::new(p.clone()));
        let eta = reconstruct_rank3(&p)?;
        let sym = eta.as_ref().is_some_and(|e| sym0_classes(e).same_classes(&t));
        r.line(format!(
            "{name}: spin = {}, p1 = 0: {}, w4 = 0: {}, irreducible: {} ({}), two-field: {}, tangent = Sym0(eta): {sym}",
            p.spin,
            p.p1.is_zero(),
            p.w4_zero,
            d.verdict,
            d.theorem,
            a.verdict
        ));
        r.expect(format!("{name} irreducible"), d.verdict == Verdict::Yes && sym);
    }

    r.line("== Connected sums of spin irreducible manifolds");
    let spin_yes: Vec<ManifoldProfile> = {
        let mut v = vec![catalog("s3xs2")?];
        v.extend(products.iter().take(4).cloned());
        v
    };
    let mut k_ok = true;
    for a in &spin_yes {
        for b in &spin_yes {
            let s = connected_sum(a, b)?;
            k_ok &= s.kervaire_semicharacteristic()
                == (a.kervaire_semicharacteristic() + b.kervaire_semicharacteristic() + 1) % 2;
        }
    }
    r.line(format!("k(a # b) = k(a) + k(b) + 1 on {} pairs: {k_ok}", spin_yes.len().pow(2)));
    r.expect("k formula for connected sums", k_ok);
    let lengths: Vec<String> = (1..=5)
        .map(|n| {
            let s = connected_sum_all(&spin_yes[..n])?;
            Ok(format!("{n}:{}", verdict(&s)?))
        })
        .collect::<Result<_, Failure>>()?;
    r.line(format!("sums by length: {}", lengths.join(" ")));
    let odd_ok = [1, 3, 5]
        .iter()
        .map(|&n| connected_sum_all(&spin_yes[..n]).map_err(Failure::from).and_then(|s| verdict(&s)))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(|v| *v == Verdict::Yes);
    r.expect("odd connected sums are irreducible", odd_ok);
    let wu_sum = connected_sum(&wu, &catalog("s3~xs2")?)?;
    r.line(format!(
        "wu # s3~xs2: spin = {}, irreducible: {}",
        wu_sum.spin,
        verdict(&wu_sum)?
    ));
    Ok(r)
}
