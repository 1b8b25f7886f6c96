//! Report documents and their json, csv and markdown renderings.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{diagonal_spectrum, to_rational};
use crate::boson::{boson_spectrum, casimir_b, BosonRep, TruncatedFockSpace};
use crate::config::RunConfig;
use crate::conventions::{ConventionRecord, SignPattern};
use crate::error::{Error, Result};
use crate::family::{CasimirOrder, MODES};
use crate::fermion::{casimir_f, classify_states, FermionOccupation, FermionRep};
use crate::hybrid::HybridRep;
use crate::suite::SuiteReport;
use crate::sweep::{resolve_conventions, ConventionReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest denominator accepted when reading eigenvalues as rationals.
const MAX_DENOMINATOR: i64 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(title: &str, columns: &[&str]) -> Self {
        Self {
            title: title.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

/// A rendered-agnostic report: tables for csv and markdown, a value for json.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub title: String,
    pub convention: ConventionRecord,
    pub tables: Vec<Table>,
    pub json: Value,
}

pub trait ReportFormat: Send + Sync {
    fn name(&self) -> &'static str;
    fn render(&self, doc: &Document) -> Result<String>;
}

pub struct JsonFormat;
pub struct CsvFormat;
pub struct MarkdownFormat;

static FORMATS: [&dyn ReportFormat; 3] = [&JsonFormat, &CsvFormat, &MarkdownFormat];

pub fn format_by_name(name: &str) -> Result<&'static dyn ReportFormat> {
    FORMATS
        .iter()
        .copied()
        .find(|f| f.name() == name)
        .ok_or_else(|| Error::UnknownName {
            kind: "format",
            name: name.to_string(),
        })
}

impl ReportFormat for JsonFormat {
    fn name(&self) -> &'static str {
        "json"
    }
    fn render(&self, doc: &Document) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&doc.json)
            .map_err(|e| Error::Config(format!("json serialization failed: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

/// A single table renders as plain csv. Several tables are separated by a
/// blank line, each preceded by a `# title` line.
impl ReportFormat for CsvFormat {
    fn name(&self) -> &'static str {
        "csv"
    }
    fn render(&self, doc: &Document) -> Result<String> {
        let mut out = String::new();
        let multi = doc.tables.len() > 1;
        for (k, t) in doc.tables.iter().enumerate() {
            if multi {
                if k > 0 {
                    out.push('\n');
                }
                out.push_str(&format!("# {}\n", t.title));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Config(format!("csv serialization failed: {e}"));
            w.write_record(&t.columns).map_err(io)?;
            for r in &t.rows {
                w.write_record(r).map_err(io)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::Config(format!("csv serialization failed: {e}")))?;
            out.push_str(&String::from_utf8_lossy(&bytes));
        }
        Ok(out)
    }
}

impl ReportFormat for MarkdownFormat {
    fn name(&self) -> &'static str {
        "md"
    }
    fn render(&self, doc: &Document) -> Result<String> {
        let mut out = format!("# {}\n", doc.title);
        let header = doc.convention.summary();
        for t in &doc.tables {
            out.push_str(&format!("\n## {}\n\nConventions: `{header}`\n\n", t.title));
            out.push_str(&format!("| {} |\n", t.columns.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(t.columns.len())));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
        }
        Ok(out)
    }
}

/// Shortest round-trip scientific form, stable across platforms.
pub fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

fn envelope(config: &RunConfig, convention: &ConventionRecord) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool_version".into(), json!(TOOL_VERSION));
    m.insert("config".into(), to_value(config));
    m.insert("conventions".into(), to_value(convention));
    m
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize to json")
}

pub fn suite_document(config: &RunConfig, report: &SuiteReport) -> Document {
    let mut t = Table::new(
        &format!("Verification suite: {}", report.suite),
        &[
            "name",
            "paper_anchor",
            "passed",
            "max_residual",
            "tolerance",
            "wall_ms",
        ],
    );
    for c in &report.checks {
        t.rows.push(vec![
            c.name.clone(),
            c.paper_anchor.to_string(),
            c.passed.to_string(),
            fmt_float(c.max_residual),
            fmt_float(c.tolerance),
            c.wall_ms.to_string(),
        ]);
    }
    let mut j = envelope(config, &report.conventions);
    j.insert("checks".into(), to_value(&report.checks));
    j.insert("passed".into(), json!(report.passed));
    Document {
        title: format!(
            "qps-casimir verify --suite {}: {}",
            report.suite,
            if report.passed { "PASS" } else { "FAIL" }
        ),
        convention: report.conventions,
        tables: vec![t],
        json: Value::Object(j),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumRow {
    pub eigenvalue_num: i64,
    pub eigenvalue_den: i64,
    pub multiplicity: usize,
    pub label_class: String,
}

impl SpectrumRow {
    pub fn value(&self) -> Rational64 {
        Rational64::new(self.eigenvalue_num, self.eigenvalue_den)
    }
}

/// Groups `(label, value)` pairs into rows sorted by exact value. Labels of
/// one eigenvalue are joined with `|` in first-seen order.
fn group_rows(entries: impl IntoIterator<Item = (String, Rational64)>) -> Vec<SpectrumRow> {
    let mut groups: BTreeMap<Rational64, (usize, Vec<String>)> = BTreeMap::new();
    for (label, v) in entries {
        let g = groups.entry(v).or_default();
        g.0 += 1;
        if !g.1.contains(&label) {
            g.1.push(label);
        }
    }
    groups
        .into_iter()
        .map(|(v, (multiplicity, labels))| SpectrumRow {
            eigenvalue_num: *v.numer(),
            eigenvalue_den: *v.denom(),
            multiplicity,
            label_class: labels.join("|"),
        })
        .collect()
}

/// A representation whose Casimir spectrum can be tabulated.
pub trait SpectrumSource: Send + Sync {
    fn name(&self) -> &'static str;
    /// Default `max_total` when none is given.
    fn default_max_total(&self, space: &TruncatedFockSpace) -> usize;
    fn spectrum(
        &self,
        config: &RunConfig,
        order: CasimirOrder,
        max_total: Option<usize>,
    ) -> Result<Vec<SpectrumRow>>;
}

pub struct FermionSpectrum;
pub struct BosonSpectrum;
pub struct HybridSpectrum;

static SOURCES: [&dyn SpectrumSource; 3] = [&FermionSpectrum, &BosonSpectrum, &HybridSpectrum];

pub const REP_NAMES: [&str; 3] = ["fermion", "boson", "hybrid"];

pub fn spectrum_source(name: &str) -> Result<&'static dyn SpectrumSource> {
    SOURCES
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::UnknownName {
            kind: "rep",
            name: name.to_string(),
        })
}

impl SpectrumSource for FermionSpectrum {
    fn name(&self) -> &'static str {
        "fermion"
    }
    fn default_max_total(&self, _: &TruncatedFockSpace) -> usize {
        MODES
    }
    fn spectrum(
        &self,
        config: &RunConfig,
        order: CasimirOrder,
        max_total: Option<usize>,
    ) -> Result<Vec<SpectrumRow>> {
        let tol = config.tolerances.exact_tol;
        let conv = config.convention();
        let rep = FermionRep::new(&conv)?;
        let c = casimir_f(&rep.xi()?, order, &conv)?;
        let limit = max_total.unwrap_or(MODES);
        let basis: Vec<(usize, usize)> = FermionOccupation::all()
            .filter(|f| f.total() <= limit)
            .map(|f| (f.index(), f.total()))
            .collect();
        let values = diagonal_spectrum(&c, &basis, tol)?;
        let entries = values
            .into_iter()
            .map(|(k, v)| Ok((format!("F={k}"), to_rational(v, MAX_DENOMINATOR, tol)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(group_rows(entries))
    }
}

impl SpectrumSource for BosonSpectrum {
    fn name(&self) -> &'static str {
        "boson"
    }
    fn default_max_total(&self, space: &TruncatedFockSpace) -> usize {
        space.safe_max()
    }
    fn spectrum(
        &self,
        config: &RunConfig,
        order: CasimirOrder,
        max_total: Option<usize>,
    ) -> Result<Vec<SpectrumRow>> {
        let tol = config.tolerances.num_tol;
        let conv = config.convention();
        let space = TruncatedFockSpace::new(config.cutoff, config.safe_margin)?;
        let rep = BosonRep::new(space, &conv)?;
        let c = casimir_b(&rep.upsilon()?, order, &conv)?;
        let limit = max_total.unwrap_or_else(|| self.default_max_total(&space));
        let entries = boson_spectrum(&rep, &c, limit, tol)?
            .into_iter()
            .map(|(n, v)| {
                Ok((
                    format!("N={}", n.total()),
                    to_rational(v, MAX_DENOMINATOR, tol)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(group_rows(entries))
    }
}

impl SpectrumSource for HybridSpectrum {
    fn name(&self) -> &'static str {
        "hybrid"
    }
    fn default_max_total(&self, space: &TruncatedFockSpace) -> usize {
        space.safe_max() + MODES
    }
    fn spectrum(
        &self,
        config: &RunConfig,
        order: CasimirOrder,
        max_total: Option<usize>,
    ) -> Result<Vec<SpectrumRow>> {
        let h = HybridRep::build(config.cutoff, config.safe_margin, &config.convention())?;
        let limit = max_total.unwrap_or_else(|| self.default_max_total(h.boson().space()));
        let table = h.spectrum_table(limit, config.tolerances.num_tol)?;
        let mut entries = Vec::new();
        for r in table {
            let v = match order {
                CasimirOrder::Linear => r.c1,
                CasimirOrder::Quadratic => r.c2,
            };
            let label = format!("N={},F={}", r.n_total, r.f_total);
            entries.extend(std::iter::repeat_n((label, v), r.degeneracy));
        }
        Ok(group_rows(entries))
    }
}

pub fn spectrum_document(
    config: &RunConfig,
    rep: &str,
    order: CasimirOrder,
    max_total: Option<usize>,
) -> Result<Document> {
    let rows = spectrum_source(rep)?.spectrum(config, order, max_total)?;
    let conv = config.convention();
    let title = format!("Casimir spectrum: {rep}, order {}", order.degree());
    let mut t = Table::new(
        &title,
        &[
            "eigenvalue_num",
            "eigenvalue_den",
            "multiplicity",
            "label_class",
        ],
    );
    for r in &rows {
        t.rows.push(vec![
            r.eigenvalue_num.to_string(),
            r.eigenvalue_den.to_string(),
            r.multiplicity.to_string(),
            r.label_class.clone(),
        ]);
    }
    let mut j = envelope(config, &conv);
    j.insert("rep".into(), json!(rep));
    j.insert("casimir".into(), json!(order.degree()));
    j.insert("rows".into(), to_value(&rows));
    Ok(Document {
        title,
        convention: conv,
        tables: vec![t],
        json: Value::Object(j),
    })
}

pub const CLASSIFICATION_COLUMNS: [&str; 10] = [
    "f0",
    "f1",
    "f2",
    "f3",
    "f4",
    "ftotal",
    "i3_sixths",
    "yw_sixths",
    "q_sixths",
    "sterile_flag",
];

pub fn classification_document(config: &RunConfig) -> Result<Document> {
    let rows = classify_states()?;
    let title = "Charge classification of the fermionic basis states";
    let mut t = Table::new(title, &CLASSIFICATION_COLUMNS);
    let mut jrows = Vec::with_capacity(rows.len());
    for r in &rows {
        let mut cells: Vec<String> = r.occupation.iter().map(|b| b.to_string()).collect();
        cells.extend([
            r.ftotal.to_string(),
            r.charges.i3_sixths.to_string(),
            r.charges.yw_sixths.to_string(),
            r.charges.q_sixths.to_string(),
            r.sterile.to_string(),
        ]);
        let obj: serde_json::Map<String, Value> = CLASSIFICATION_COLUMNS
            .iter()
            .zip(&cells)
            .map(|(k, v)| {
                let value = match v.as_str() {
                    "true" => json!(true),
                    "false" => json!(false),
                    n => json!(n.parse::<i64>().expect("integer cell")),
                };
                (k.to_string(), value)
            })
            .collect();
        jrows.push(Value::Object(obj));
        t.rows.push(cells);
    }
    // charges do not depend on the sign conventions; the header records the
    // default under which the linear Casimir column was produced
    let conv = ConventionRecord::default();
    let mut j = envelope(config, &conv);
    j.insert("rows".into(), Value::Array(jrows));
    Ok(Document {
        title: title.to_string(),
        convention: conv,
        tables: vec![t],
        json: Value::Object(j),
    })
}

fn pattern_label(s: &[i8; MODES]) -> String {
    SignPattern::from_signs(s)
        .map(|p| p.label().to_string())
        .unwrap_or_else(|| format!("{s:?}"))
}

pub fn conventions_document(config: &RunConfig, report: &ConventionReport) -> Document {
    let default = ConventionRecord::default();
    let items: Vec<&str> = report.rows[0]
        .results
        .iter()
        .map(|r| r.item.name())
        .collect();
    let mut cols = vec!["index", "zeta_star", "z_star", "fermionic_c2", "bosonic_c2"];
    cols.extend(items.iter().copied());
    cols.extend(["headline_passed", "selected", "failures"]);
    let mut matrix = Table::new("Convention sweep", &cols);
    for row in &report.rows {
        let c = &row.convention;
        let mut cells = vec![
            row.index.to_string(),
            pattern_label(&c.zeta_star_sign),
            pattern_label(&c.z_star_sign),
            c.fermionic_c2_pairing.name().to_string(),
            c.bosonic_c2_pairing.name().to_string(),
        ];
        cells.extend(
            row.results
                .iter()
                .map(|r| if r.passed { "PASS" } else { "FAIL" }.to_string()),
        );
        let failures: Vec<String> = row
            .results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| format!("{}: FAIL", r.item.name()))
            .collect();
        cells.extend([
            format!("{}/{}", row.headline_passed, report.headline_items),
            if *c == default { "default" } else { "" }.to_string(),
            failures.join("; "),
        ]);
        matrix.rows.push(cells);
    }
    let mut dev = Table::new(
        "Literal forms the selected convention departs from",
        &[
            "name",
            "literal_form",
            "adopted_form",
            "literal_residual",
            "adopted_residual",
        ],
    );
    for d in &report.deviations {
        dev.rows.push(vec![
            d.name.to_string(),
            d.literal_form.to_string(),
            d.adopted_form.to_string(),
            fmt_float(d.literal_residual),
            fmt_float(d.adopted_residual),
        ]);
    }
    let mut j = envelope(config, &default);
    j.insert("sweep".into(), to_value(report));
    j.insert("unique_best".into(), json!(report.unique_best()));
    j.insert("default_is_best".into(), json!(report.default_is_best()));
    Document {
        title: "Convention resolution".to_string(),
        convention: default,
        tables: vec![matrix, dev],
        json: Value::Object(j),
    }
}

pub fn run_conventions(config: &RunConfig) -> Result<Document> {
    let report = resolve_conventions(config.cutoff, config.safe_margin, &config.tolerances)?;
    Ok(conventions_document(config, &report))
}

/// Every spectrum, the classification and the sweep next to a suite report.
pub fn combined_document(config: &RunConfig, suite: &SuiteReport) -> Result<Document> {
    let mut parts = vec![suite_document(config, suite)];
    for rep in REP_NAMES {
        for order in [CasimirOrder::Linear, CasimirOrder::Quadratic] {
            parts.push(spectrum_document(config, rep, order, None)?);
        }
    }
    parts.push(classification_document(config)?);
    parts.push(run_conventions(config)?);

    let mut j = envelope(config, &suite.conventions);
    j.insert("checks".into(), to_value(&suite.checks));
    j.insert("passed".into(), json!(suite.passed));
    let mut spectra = serde_json::Map::new();
    for p in &parts[1..=2 * REP_NAMES.len()] {
        let key = format!(
            "{}_{}",
            p.json["rep"].as_str().unwrap_or(""),
            p.json["casimir"]
        );
        spectra.insert(key, p.json["rows"].clone());
    }
    j.insert("spectra".into(), Value::Object(spectra));
    let n = parts.len();
    j.insert("classification".into(), parts[n - 2].json["rows"].clone());
    j.insert("sweep".into(), parts[n - 1].json["sweep"].clone());
    Ok(Document {
        title: format!(
            "qps-casimir report: {}",
            if suite.passed { "PASS" } else { "FAIL" }
        ),
        convention: suite.conventions,
        tables: parts.into_iter().flat_map(|p| p.tables).collect(),
        json: Value::Object(j),
    })
}
