//! `spinrep`: build groups, print duals and character tables, extend presentations,
//! inspect factor sets and run the verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 unsupported construction.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinrep_core::catalog::{self, canonical_name, CatalogGroup, ExpectedFile};
use spinrep_core::dsl::render_document;
use spinrep_core::mackey::MackeyError;
use spinrep_core::pcgroup::{one_step_extension, verify_consistency, CentralExtension, GroupError};
use spinrep_core::{sectional_restriction, CatalogError, CharacterTable, PcDocument, RepLabel};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        let msg = e.to_string();
        match e {
            CatalogError::Mackey(MackeyError::Unsupported { .. } | MackeyError::NoIntertwiner(_)) => {
                CliError::Unsupported(msg)
            }
            CatalogError::Mackey(
                MackeyError::Incomplete { .. } | MackeyError::NotOrthonormal(..) | MackeyError::Reducible { .. },
            )
            | CatalogError::Group(GroupError::Inconsistent(_) | GroupError::CollectionBudget(_))
            | CatalogError::Triple(_) => CliError::Verification(msg),
            _ => CliError::Input(msg),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "spinrep",
    version,
    about = "Exact character tables of small polycyclic groups and their representation groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Presentation file (`.pcp`) or catalog name.
    #[arg(value_name = "SOURCE")]
    source: Option<String>,
    /// Catalog name (g18_4, g20, r54_8, g54_5) or presentation file.
    #[arg(long, value_name = "NAME|FILE")]
    catalog: Option<String>,
    /// Tower overriding the declared one, e.g. `U: x1 x2 | W: w`.
    #[arg(long, value_name = "SPEC")]
    tower: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Json,
    Csv,
}

/// Where and how tables and reports are written.
#[derive(Args)]
struct OutputConfig {
    #[arg(long, value_enum, default_value = "ascii")]
    format: Format,
    /// Digits after the decimal point in approximations.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=17))]
    precision: u16,
    /// Write to this path instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a presentation; print its structure report.
    Build {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: OutputConfig,
    },
    /// Compute the dual and print the character table.
    Dual {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: OutputConfig,
        /// Render ASCII cells as decimals instead of powers of w.
        #[arg(long)]
        decimal: bool,
        /// Keep only spin-type irreducibles.
        #[arg(long)]
        spin_only: bool,
    },
    /// Adjoin a central z with [x, y] = z for a commuting pair; writes the new `.pcp`.
    Extend {
        #[command(flatten)]
        source: Source,
        /// Generator pair `x,y`.
        #[arg(long, value_name = "X,Y")]
        pair: String,
        /// Write the extended presentation here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run the verification suite; exit 1 if any check fails.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Expected-values file replacing the catalog's own.
        #[arg(long, value_name = "PATH")]
        expected: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
    /// Factor sets of the spin irreducibles of r54_8 restricted along the normal-form section.
    FactorSet {
        /// Only this irreducible, e.g. `R(1;0)`.
        #[arg(long)]
        label: Option<String>,
        #[command(flatten)]
        output: OutputConfig,
    },
    /// List the catalog groups.
    List,
}

fn load(src: &Source) -> Result<CatalogGroup, CliError> {
    let name = src
        .catalog
        .as_deref()
        .or(src.source.as_deref())
        .ok_or_else(|| CliError::Input("no group given; pass a file or --catalog NAME".into()))?;
    let group = if canonical_name(name).is_some() && !Path::new(name).is_file() {
        catalog::build(name)?
    } else {
        let text = std::fs::read_to_string(name).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        CatalogGroup::from_source(&text, None).map_err(|e| match e {
            CatalogError::Parse(_) => CliError::Input(format!("{name}:\n{e}")),
            other => other.into(),
        })?
    };
    match &src.tower {
        Some(t) => Ok(group.with_tower_text(t)?),
        None => Ok(group),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cmd_build(src: &Source, output: &OutputConfig) -> Result<(), CliError> {
    let g = load(src)?;
    let report = g.group.structure_report();
    let text = match output.format {
        Format::Json => json(&report),
        Format::Ascii | Format::Csv => {
            let inv = &report.invariants;
            let mut s = String::new();
            let _ = writeln!(s, "group            {}", report.name);
            let _ = writeln!(s, "generators       {}", report.generators.join(" "));
            let _ = writeln!(s, "relative orders  {:?}", report.relative_orders);
            let _ = writeln!(s, "consistent       {}", report.consistent);
            let _ = writeln!(s, "order            {}", inv.order);
            let _ = writeln!(s, "center order     {}", inv.center_order);
            let _ = writeln!(s, "derived order    {}", inv.derived_order);
            let _ = writeln!(s, "abelianization   {}", inv.abelianization_order);
            let _ = writeln!(s, "classes          {}", inv.class_count);
            let census: Vec<String> = inv.element_order_census.iter().map(|(o, n)| format!("{o}:{n}")).collect();
            let _ = writeln!(s, "order census     {}", census.join(" "));
            if let Some(t) = &g.document.tower {
                let _ = writeln!(s, "tower            {t}");
            }
            s
        }
    };
    emit(&text, output.out.as_deref())?;
    if report.consistent {
        Ok(())
    } else {
        Err(CliError::Verification("presentation is inconsistent".into()))
    }
}

fn cmd_dual(src: &Source, output: &OutputConfig, decimal: bool, spin_only: bool) -> Result<(), CliError> {
    let g = load(src)?;
    let irreps = catalog::dual(&g)?;
    if spin_only && irreps.iter().all(|i| i.spin.is_none()) {
        eprintln!("note: spin types are only tracked for r54_8; no rows selected");
    }
    let mut table = CharacterTable::new(&g.group, &irreps, output.precision as usize);
    if spin_only {
        table = table.spin_only();
    }
    let text = match output.format {
        Format::Ascii => table.to_ascii(decimal),
        Format::Json => table.to_json(),
        Format::Csv => table.to_csv(),
    };
    emit(&text, output.out.as_deref())
}

fn cmd_extend(src: &Source, pair: &str, out: Option<&Path>) -> Result<(), CliError> {
    let g = load(src)?;
    let (x, y) = pair
        .split_once(',')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| CliError::Input(format!("--pair expects `x,y`, got `{pair}`")))?;
    let ext = one_step_extension(g.group.presentation(), x, y).map_err(|e| CliError::Input(e.to_string()))?;
    let consistency = verify_consistency(&ext.presentation);
    let mut report = String::new();
    let _ = writeln!(report, "extension of {} by [{x}, {y}] = z, z of order {}", g.name, ext.degree);
    if !consistency.passed {
        let failure = serde_json::to_string(&consistency.failure).expect("serializable");
        let _ = writeln!(report, "consistency      failed: {failure}");
    }
    let cover = if consistency.passed {
        Some(CentralExtension::from_one_step(&ext, g.group.clone()).map_err(|e| CliError::Input(e.to_string()))?)
    } else {
        None
    };
    let efficiency = cover.as_ref().map(CentralExtension::verify);
    if let Some(r) = &efficiency {
        let _ = writeln!(report, "order            {} = {} * {}", r.cover_order, r.kernel_order, r.base_order);
        let _ = writeln!(report, "z central        {}", r.z_in_center);
        let _ = writeln!(report, "z in derived     {}", r.z_in_derived);
        let _ = writeln!(report, "kernel = <z>     {}", r.kernel_is_generated_by_z);
        let _ = writeln!(report, "projection hom   {}", r.projection_is_homomorphism);
        let _ = writeln!(report, "efficiency       {}", if r.passed() { "pass" } else { "fail" });
    }
    let doc = PcDocument { presentation: ext.presentation, tower: None };
    let pcp = render_document(&doc);
    match out {
        Some(_) => {
            emit(&pcp, out)?;
            print!("{report}");
        }
        None => {
            // keep stdout a valid presentation file
            for line in report.lines() {
                println!("# {line}");
            }
            print!("{pcp}");
        }
    }
    match efficiency {
        Some(r) if r.passed() => Ok(()),
        Some(_) => Err(CliError::Verification("efficiency check failed".into())),
        None => Err(CliError::Verification("extended presentation is inconsistent".into())),
    }
}

fn cmd_verify(src: &Source, expected: Option<&Path>, format: Format) -> Result<(), CliError> {
    let g = load(src)?;
    let file = match expected {
        Some(p) => Some(ExpectedFile::load(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?),
        None if g.is_catalog() => Some(ExpectedFile::current()?),
        None => None,
    };
    let exp = file.as_ref().and_then(|f| f.groups.get(&g.name));
    let results = catalog::verify(&g, exp);
    let text = match format {
        Format::Json => json(&results),
        Format::Ascii | Format::Csv => {
            let mut s = String::new();
            for r in &results {
                let status = if r.passed { "pass" } else { "FAIL" };
                let _ = writeln!(
                    s,
                    "{status}  {}{}",
                    r.name,
                    if r.detail.is_empty() { String::new() } else { format!("  ({})", r.detail) }
                );
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            let _ = writeln!(s, "{} checks, {failed} failed", results.len());
            s
        }
    };
    print!("{text}");
    match results.iter().filter(|r| !r.passed).count() {
        0 => Ok(()),
        n => Err(CliError::Verification(format!("{n} checks failed"))),
    }
}

fn cmd_factor_set(label: Option<&str>, output: &OutputConfig) -> Result<(), CliError> {
    let cover = catalog::build("r54_8")?;
    let base = catalog::build("g18_4")?;
    let ext = catalog::representation_group_extension(&cover, &base)?;
    let wanted = label
        .map(|l| RepLabel::parse(l).ok_or_else(|| CliError::Input(format!("cannot parse label `{l}`"))))
        .transpose()?;
    let section = ext.normal_form_section();
    let names = base.group.presentation().generators().to_vec();
    let word = |a: usize| -> String {
        let parts: Vec<String> = base
            .group
            .element(a)
            .syllables()
            .map(|(g, e)| if e == 1 { names[g].clone() } else { format!("{}^{e}", names[g]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("")
        }
    };
    let mut text = String::new();
    let mut json_out = Vec::new();
    let mut found = false;
    for irrep in catalog::spin_irreps(&cover)? {
        if wanted.as_ref().is_some_and(|l| l != irrep.label()) {
            continue;
        }
        found = true;
        let p = sectional_restriction(&irrep.rep, &ext, &section).map_err(|e| CliError::Input(e.to_string()))?;
        let fs = p.factor_set();
        let n = base.group.order();
        match output.format {
            Format::Json => json_out.push(serde_json::json!({
                "label": irrep.label().to_string(),
                "elements": (0..n).map(|a| base.group.element(a).exponents().to_vec()).collect::<Vec<_>>(),
                "values": (0..n).map(|a| (0..n).map(|b| fs.value(a, b).clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "cocycle": fs.verify_cocycle(),
            })),
            Format::Ascii | Format::Csv => {
                let sep = if matches!(output.format, Format::Csv) { "," } else { " " };
                let _ = writeln!(text, "{}  cocycle identity: {}", irrep.label(), if fs.verify_cocycle() { "holds" } else { "fails" });
                let header: Vec<String> = (0..n).map(word).collect();
                let _ = writeln!(text, "r(g,h){sep}{}", header.join(sep));
                for a in 0..n {
                    let row: Vec<String> = (0..n).map(|b| fs.value(a, b).symbolic()).collect();
                    let _ = writeln!(text, "{}{sep}{}", word(a), row.join(sep));
                }
                text.push('\n');
            }
        }
    }
    if !found {
        return Err(CliError::Input("no spin irreducible of r54_8 has that label".into()));
    }
    if matches!(output.format, Format::Json) {
        text = json(
            &serde_json::json!({ "schema_version": 1, "group": "r54_8", "base": "g18_4", "factor_sets": json_out }),
        );
    }
    emit(&text, output.out.as_deref())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Build { source, output } => cmd_build(source, output),
        Command::Dual { source, output, decimal, spin_only } => cmd_dual(source, output, *decimal, *spin_only),
        Command::Extend { source, pair, out } => cmd_extend(source, pair, out.as_deref()),
        Command::Verify { source, expected, format } => cmd_verify(source, expected.as_deref(), *format),
        Command::FactorSet { label, output } => cmd_factor_set(label.as_deref(), output),
        Command::List => {
            for name in catalog::NAMES {
                let g = catalog::build(name)?;
                println!(
                    "{name}  order {}  generators {}",
                    g.group.order(),
                    g.group.presentation().generators().join(" ")
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
