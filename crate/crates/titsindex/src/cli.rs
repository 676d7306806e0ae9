//! The `tits` command line: catalogs, single checks and golden verification.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::brauer::{self, Verdict, VerdictKind};
use crate::candim::{self, CandimTable};
use crate::diagram::{self, StarAction};
use crate::error::{Result, TitsError};
use crate::indexer::{self, TitsIndex};
use crate::rootkit::Kind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "tits", about = "Tits indices: catalogs, admissibility checks and Tits-algebra conditions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Every combinatorially admissible index with its verdict.
    Catalog {
        #[command(flatten)]
        select: Selector,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Admissibility witnesses and the constraint trace of one index.
    Check {
        #[command(flatten)]
        select: Selector,
        /// Circled vertices, comma separated.
        #[arg(long, value_delimiter = ',')]
        circled: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Runs every suite against the golden files.
    Verify {
        /// Directory of golden condition files.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct Selector {
    /// Type letter (A..G), also accepted as `--type`.
    #[arg(value_name = "TYPE")]
    kind_pos: Option<String>,
    #[arg(value_name = "RANK")]
    rank_pos: Option<usize>,
    /// Order of the *-action.
    #[arg(value_name = "GAMMA")]
    gamma_pos: Option<usize>,
    #[arg(long = "type")]
    kind: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    gamma: Option<usize>,
}

impl Selector {
    fn resolve(&self) -> Result<(Kind, usize, StarAction)> {
        let kind: Kind = self
            .kind
            .as_ref()
            .or(self.kind_pos.as_ref())
            .ok_or_else(|| TitsError::UnknownKind("missing type".into()))?
            .parse()?;
        let rank = self
            .rank
            .or(self.rank_pos)
            .ok_or(TitsError::InvalidType { kind, rank: 0 })?;
        let order = self.gamma.or(self.gamma_pos).unwrap_or(1);
        let gamma = diagram::gamma_of_order(kind, rank, order)?;
        Ok((kind, rank, gamma))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Md,
    Text,
}

/// One catalog line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRow {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
    pub gamma_order: usize,
    pub circled: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
    pub label: String,
    pub relative_rank: usize,
    pub relative_type: Option<String>,
    pub verdict: VerdictKind,
    pub conditions: Vec<String>,
    pub trace: Vec<String>,
}

pub fn data_dir() -> PathBuf {
    std::env::var_os("TITS_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

fn candim_table() -> Result<CandimTable> {
    let path = data_dir().join("candim.json");
    if path.exists() {
        CandimTable::load(&path)
    } else {
        Ok(CandimTable::embedded())
    }
}

pub fn catalog_rows(kind: Kind, rank: usize, gamma: &StarAction) -> Result<Vec<CatalogRow>> {
    brauer::section6_catalog(kind, rank, gamma)?
        .into_iter()
        .map(|(index, v)| row(&index, v))
        .collect()
}

fn row(index: &TitsIndex, v: Verdict) -> Result<CatalogRow> {
    let rel = indexer::relative_system(index)?;
    Ok(CatalogRow {
        kind: index.kind.to_string(),
        rank: index.rank,
        gamma_order: index.gamma.order(),
        circled: index.circled.clone(),
        orbits: index.orbits(),
        label: v.label,
        relative_rank: rel.relative_rank,
        relative_type: rel.relative_type,
        verdict: v.verdict,
        conditions: v.conditions,
        trace: v.trace,
    })
}

fn set(j: &[usize]) -> String {
    format!("{{{}}}", j.iter().join(","))
}

fn json<T: Serialize>(value: &T) -> String {
    // Round trip through `Value` so object keys come out sorted.
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

fn verdict_text(r: &CatalogRow) -> String {
    match r.verdict {
        VerdictKind::Excluded => "EXCLUDED".to_string(),
        VerdictKind::Conditions if r.conditions.is_empty() => "no conditions".to_string(),
        VerdictKind::Conditions => r.conditions.join("; "),
    }
}

fn family_pattern(kind: Kind, order: usize) -> Option<&'static str> {
    match (kind, order) {
        (Kind::A, 1) => Some("J = {d, 2d, ..., rd} with d(r+1) = n+1"),
        (Kind::A, 2) => Some("J = {d, 2d, ..., rd} and its mirror, d | n+1, 2rd <= n+1"),
        (Kind::B, _) | (Kind::C, _) => Some("J = {d, 2d, ..., rd}"),
        (Kind::D, 1) => Some("J = {d, 2d, ..., rd}, rd != n-1"),
        (Kind::D, 2) => Some("J = {d, 2d, ..., rd}, or {d, ..., (r-1)d, n-1, n} when rd = n-1"),
        _ => None,
    }
}

fn render_catalog(kind: Kind, rank: usize, gamma: &StarAction, rows: &[CatalogRow], format: Format) -> String {
    match format {
        Format::Json => json(&rows),
        Format::Text => rows
            .iter()
            .map(|r| format!("{:<14} J={:<20} {:<6} {}", r.label, set(&r.circled), r.relative_type.as_deref().unwrap_or("-"), verdict_text(r)))
            .join("\n")
            + "\n",
        Format::Md => {
            let mut out = format!("# {kind}{rank}, *-action of order {}\n\n", gamma.order());
            if let Some(p) = family_pattern(kind, gamma.order()) {
                out.push_str(&format!("Family pattern: `{p}`; rows below are the instance n = {rank}.\n\n"));
            }
            for r in rows {
                out.push_str(&format!("## {} (J = {})\n\n", r.label, set(&r.circled)));
                out.push_str("```\n");
                out.push_str(&diagram::render_ascii(kind, rank, &r.circled, Some(gamma)));
                out.push_str("\n```\n\n");
                out.push_str(&format!("- relative type: {}\n- verdict: {}\n\n", r.relative_type.as_deref().unwrap_or("none"), verdict_text(r)));
            }
            out
        }
    }
}

fn cmd_catalog(select: &Selector, format: Format, out: &mut dyn Write) -> Result<i32> {
    let (kind, rank, gamma) = select.resolve()?;
    let rows = catalog_rows(kind, rank, &gamma)?;
    write!(out, "{}", render_catalog(kind, rank, &gamma, &rows, format)).ok();
    Ok(EXIT_OK)
}

fn cmd_check(select: &Selector, circled: &[usize], format: Format, out: &mut dyn Write) -> Result<i32> {
    let (kind, rank, gamma) = select.resolve()?;
    let circled: Vec<usize> = circled.iter().copied().sorted().dedup().collect();
    let report = indexer::is_admissible(kind, rank, &gamma, &circled)?;
    let index = TitsIndex::new(kind, rank, gamma.clone(), &circled)?;
    let verdict = if report.admissible { Some(brauer::decide(&index)?) } else { None };
    let summary = match &verdict {
        None => "not combinatorially admissible".to_string(),
        Some(v) if v.is_excluded() => format!(
            "combinatorially admissible; EXCLUDED by rule {}",
            v.rule.as_deref().unwrap_or("?")
        ),
        Some(v) if v.conditions.is_empty() => "combinatorially admissible; no conditions".to_string(),
        Some(v) => format!("combinatorially admissible; conditions: {}", v.conditions.join("; ")),
    };
    if format == Format::Json {
        let value = serde_json::json!({
            "admissibility": report,
            "summary": summary,
            "verdict": verdict,
        });
        writeln!(out, "{}", json(&value)).ok();
        return Ok(EXIT_OK);
    }
    writeln!(out, "{}", diagram::render_ascii(kind, rank, &circled, Some(&gamma))).ok();
    writeln!(out, "opposition test per orbit of J and the affine vertex:").ok();
    for w in &report.witnesses {
        writeln!(
            out,
            "  orbit {}: components {} -> image {} ({})",
            set(&w.orbit),
            w.components.join(" + "),
            set(&w.image),
            if w.invariant { "invariant" } else { "NOT invariant" }
        )
        .ok();
    }
    writeln!(out, "{summary}").ok();
    if let Some(v) = verdict {
        writeln!(out, "label: {}", v.label).ok();
        writeln!(out, "trace:").ok();
        for t in &v.trace {
            writeln!(out, "  {t}").ok();
        }
    }
    Ok(EXIT_OK)
}

/// A golden condition file: one theorem, one or more concrete instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenFile {
    pub theorem: String,
    pub note: String,
    pub instances: Vec<GoldenInstance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenInstance {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
    pub gamma_order: usize,
    pub entries: Vec<GoldenEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub label: String,
    pub circled: Vec<usize>,
    pub verdict: VerdictKind,
    pub conditions: Vec<String>,
}

pub fn load_goldens(dir: &Path) -> Result<Vec<(String, GoldenFile)>> {
    let entries = std::fs::read_dir(dir).map_err(|source| TitsError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut files = Vec::new();
    for e in entries {
        let path = e
            .map_err(|source| TitsError::Io { path: dir.display().to_string(), source })?
            .path();
        if path.extension().is_some_and(|x| x == "json") {
            let text = std::fs::read_to_string(&path).map_err(|source| TitsError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let file: GoldenFile = serde_json::from_str(&text).map_err(|source| TitsError::Json {
                path: path.display().to_string(),
                source,
            })?;
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            files.push((name, file));
        }
    }
    if files.is_empty() {
        return Err(TitsError::Table(format!("no golden files in {}", dir.display())));
    }
    files.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(files)
}

/// Differences between the engine and one golden instance; empty when equal.
pub fn diff_instance(file: &str, inst: &GoldenInstance) -> Result<Vec<String>> {
    let kind: Kind = inst.kind.parse()?;
    let gamma = diagram::gamma_of_order(kind, inst.rank, inst.gamma_order)?;
    let got: BTreeMap<Vec<usize>, Verdict> = brauer::section6_catalog(kind, inst.rank, &gamma)?
        .into_iter()
        .map(|(i, v)| (i.circled, v))
        .collect();
    let want: BTreeMap<Vec<usize>, &GoldenEntry> = inst.entries.iter().map(|e| (e.circled.clone(), e)).collect();
    let tag = format!("{file} {}{} |Gamma|={}", inst.kind, inst.rank, inst.gamma_order);
    let mut diffs = Vec::new();
    for (j, e) in &want {
        match got.get(j) {
            None => diffs.push(format!("{tag} {} J={}: golden entry not produced", e.label, set(j))),
            Some(v) => {
                if v.label != e.label || v.verdict != e.verdict || v.conditions != e.conditions {
                    diffs.push(format!(
                        "{tag} {} J={}: expected {} {:?} {:?}, got {} {:?} {:?}",
                        e.label,
                        set(j),
                        e.label,
                        e.verdict,
                        e.conditions,
                        v.label,
                        v.verdict,
                        v.conditions
                    ));
                }
            }
        }
    }
    for (j, v) in &got {
        if !want.contains_key(j) {
            diffs.push(format!("{tag} {} J={}: produced but missing from golden", v.label, set(j)));
        }
    }
    Ok(diffs)
}

/// Types and ranks of the catalog equivalence sweep.
pub fn equivalence_scope() -> Vec<(Kind, usize)> {
    let mut out = Vec::new();
    for (kind, lo) in [(Kind::A, 1), (Kind::B, 2), (Kind::C, 2), (Kind::D, 4)] {
        out.extend((lo..=12).map(|n| (kind, n)));
    }
    out.extend([(Kind::E, 6), (Kind::E, 7), (Kind::E, 8), (Kind::F, 4), (Kind::G, 2)]);
    out
}

/// Circled sets found by enumeration but absent from the closed form, and vice versa.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogGap {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
    pub gamma_order: usize,
    pub enumerated_only: Vec<Vec<usize>>,
    pub closed_form_only: Vec<Vec<usize>>,
}

pub fn catalog_gaps() -> Result<Vec<CatalogGap>> {
    let mut gaps = Vec::new();
    for (kind, rank) in equivalence_scope() {
        for gamma in diagram::subgroups_up_to_conjugacy(kind, rank)? {
            let e = indexer::enumerate(kind, rank, &gamma)?.circled_sets();
            let c = indexer::closed_form(kind, rank, &gamma)?.circled_sets();
            let only_e: Vec<Vec<usize>> = e.iter().filter(|j| !c.contains(j)).cloned().collect();
            let only_c: Vec<Vec<usize>> = c.iter().filter(|j| !e.contains(j)).cloned().collect();
            if !only_e.is_empty() || !only_c.is_empty() {
                gaps.push(CatalogGap {
                    kind: kind.to_string(),
                    rank,
                    gamma_order: gamma.order(),
                    enumerated_only: only_e,
                    closed_form_only: only_c,
                });
            }
        }
    }
    Ok(gaps)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| TitsError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| TitsError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn suite_line(out: &mut dyn Write, name: &str, diffs: &[String]) {
    let status = if diffs.is_empty() { "PASS" } else { "FAIL" };
    writeln!(out, "[{status}] {name}").ok();
    for d in diffs {
        writeln!(out, "    {d}").ok();
    }
}

fn cmd_verify(golden: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let data = data_dir();
    let golden_dir = golden.map(Path::to_path_buf).unwrap_or_else(|| data.join("section6"));
    let goldens = load_goldens(&golden_dir)?;
    let recorded: Vec<CatalogGap> = read_json(&data.join("catalog_gaps.json"))?;
    let table = candim_table()?;
    let mut failed = false;

    let gaps = catalog_gaps()?;
    let mut diffs = Vec::new();
    for g in gaps.iter().filter(|g| !recorded.contains(g)) {
        diffs.push(format!("unrecorded difference: {}", json(g).replace('\n', " ")));
    }
    for g in recorded.iter().filter(|g| !gaps.contains(g)) {
        diffs.push(format!("recorded difference no longer present: {}{} |Gamma|={}", g.kind, g.rank, g.gamma_order));
    }
    let name = format!(
        "catalog equivalence: enumerate vs closed form ({} recorded differences, see catalog_gaps.json)",
        recorded.len()
    );
    failed |= !diffs.is_empty();
    suite_line(out, &name, &diffs);

    let mut diffs = Vec::new();
    let mut labels = Vec::new();
    for (file, g) in &goldens {
        for inst in &g.instances {
            diffs.extend(diff_instance(file, inst)?);
            labels.extend(
                inst.entries
                    .iter()
                    .filter(|e| e.verdict == VerdictKind::Conditions)
                    .map(|e| e.label.clone()),
            );
        }
    }
    failed |= !diffs.is_empty();
    suite_line(out, &format!("golden conditions ({} files)", goldens.len()), &diffs);

    let mut diffs = Vec::new();
    let mut surviving = Vec::new();
    for (kind, rank) in [(Kind::E, 6), (Kind::E, 7), (Kind::E, 8), (Kind::F, 4), (Kind::G, 2)] {
        for (_, v) in brauer::section6_catalog(kind, rank, &StarAction::trivial(rank))? {
            if !v.is_excluded() {
                surviving.push(v.label);
            }
        }
    }
    let surviving: Vec<String> = surviving.into_iter().sorted().dedup().collect();
    let rows: Vec<String> = table.rows.keys().cloned().collect();
    if surviving != rows {
        diffs.push(format!("candim rows {rows:?} differ from surviving inner labels {surviving:?}"));
    }
    for l in &rows {
        if !labels.contains(l) {
            diffs.push(format!("candim label {l} has no golden entry"));
        }
    }
    for prefix in candim::PREFIXES {
        let d = table.verify_distinguishing(prefix);
        for w in d.witnesses.iter().filter(|w| w.p.is_none()) {
            diffs.push(format!("{} and {} agree at every prime", w.left, w.right));
        }
    }
    failed |= !diffs.is_empty();
    suite_line(out, "labels and canonical dimension table (5 inner exceptional types)", &diffs);

    Ok(if failed { EXIT_MISMATCH } else { EXIT_OK })
}

/// Parses arguments and runs one command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                write!(out, "{text}").ok();
            } else {
                write!(err, "{text}").ok();
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Catalog { select, format } => cmd_catalog(select, *format, out),
        Command::Check { select, circled, format } => cmd_check(select, circled, *format, out),
        Command::Verify { golden } => cmd_verify(golden.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            EXIT_USAGE
        }
    }
}
