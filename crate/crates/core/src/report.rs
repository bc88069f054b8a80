//! Run reports for the command-line front end and the catalog runner.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cohom::{self, CohomReport, BRUTE_BOUND};
use crate::error::{Error, Result};
use crate::fusion::{classify, Classification, FusionSystem};
use crate::grp::aut::{automorphism_group_capped, AUT_CAP};
use crate::grp::group::GROUP_CAP;
use crate::grp::parse::load_group;
use crate::grp::FiniteGroup;
use crate::kappa::{centralizing_aut_structure, kappa_kernel, kappa_tilde, CentralizingReport, KernelReport};
use crate::locality::{
    build_group_locality, check_normalizers_characteristic_p, lambda, restrict_locality, restriction_isomorphism,
    roundtrip_locality, roundtrip_transporter, verify_locality, Locality, RestrictionReport, RoundTripReport,
    SEARCH_NODE_CAP,
};
use crate::rigid::{
    check_mu, compute_aut0, cross_check_bruteforce, remark_stronger_check, verify_exponent_and_split, SplitReport,
    StrongerReport,
};
use crate::translink::{
    build_linking, build_transporter, check_characteristic_p, object_set, verify_transporter_axioms, AxiomResult,
    ObjectChoice, TransporterSystem,
};

pub const SCHEMA: &str = "fusionkit.report.v1";
pub const CATALOG_SCHEMA: &str = "fusionkit.catalog.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    Classify,
    Linking,
    Locality,
    Roundtrip,
    Lim1,
    Out0,
    Kappa,
}

impl Task {
    pub const ALL: [Task; 7] =
        [Task::Classify, Task::Linking, Task::Locality, Task::Roundtrip, Task::Lim1, Task::Out0, Task::Kappa];

    pub fn name(self) -> &'static str {
        match self {
            Task::Classify => "classify",
            Task::Linking => "linking",
            Task::Locality => "locality",
            Task::Roundtrip => "roundtrip",
            Task::Lim1 => "lim1",
            Task::Out0 => "out0",
            Task::Kappa => "kappa",
        }
    }

    /// Parses a task name; `all` expands to every task.
    pub fn parse(s: &str) -> Option<Vec<Task>> {
        if s == "all" {
            return Some(Task::ALL.to_vec());
        }
        Task::ALL.iter().find(|t| t.name() == s).map(|&t| vec![t])
    }

    /// Tasks checking one of the four main results: 1 localities, 2 linking systems,
    /// 3 the center functor, 4 the comparison map from Out(G).
    pub fn for_theorem(n: u32) -> Option<Vec<Task>> {
        match n {
            1 => Some(vec![Task::Classify, Task::Locality, Task::Roundtrip, Task::Out0]),
            2 => Some(vec![Task::Classify, Task::Linking, Task::Out0]),
            3 => Some(vec![Task::Classify, Task::Lim1]),
            4 => Some(vec![Task::Classify, Task::Kappa]),
            _ => None,
        }
    }
}

pub fn objects_name(c: ObjectChoice) -> &'static str {
    match c {
        ObjectChoice::Centric => "centric",
        ObjectChoice::Subcentric => "subcentric",
        ObjectChoice::AllNonidentity => "all-nonidentity",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub group: usize,
    pub aut: usize,
    pub search_nodes: u64,
    pub brute: u128,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps { group: GROUP_CAP, aut: AUT_CAP, search_nodes: SEARCH_NODE_CAP, brute: BRUTE_BOUND }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub prime: u32,
    pub objects: ObjectChoice,
    pub tasks: BTreeSet<Task>,
    pub caps: Caps,
    pub oracle: bool,
    /// Adds wall-clock time to reports, which then differ between runs.
    pub timing: bool,
}

impl RunOptions {
    pub fn new(prime: u32) -> RunOptions {
        RunOptions {
            prime,
            objects: ObjectChoice::Centric,
            tasks: Task::ALL.into_iter().collect(),
            caps: Caps::default(),
            oracle: true,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupBlock {
    pub file: String,
    pub degree: usize,
    pub order: usize,
    pub generators: Vec<String>,
    pub sylow_order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub representative: String,
    pub order: usize,
    pub size: usize,
    pub fully_normalized_rep: String,
    pub centric: bool,
    pub radical: bool,
    pub subcentric: bool,
    pub essential_candidate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyBlock {
    pub subgroups: usize,
    pub classes: Vec<ClassRow>,
    pub centric: usize,
    pub centric_radical: usize,
    pub subcentric: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemBlock {
    pub kind: String,
    pub objects: usize,
    pub morphisms: usize,
    pub checks: Vec<AxiomResult>,
    /// Properties recorded without entering the verdict.
    pub informational: Vec<AxiomResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityBlock {
    pub kind: String,
    pub objects: usize,
    pub carrier: usize,
    pub checks: Vec<AxiomResult>,
    pub informational: Vec<AxiomResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalitySection {
    pub group_locality: LocalityBlock,
    pub linking_locality: LocalityBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restriction_to_centric: Option<RestrictionReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripSection {
    pub transporter_category: RoundTripReport,
    pub linking_system: RoundTripReport,
    pub group_locality: RoundTripReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct Out0Section {
    pub aut0_checks: Vec<AxiomResult>,
    pub mu_checks: Vec<AxiomResult>,
    pub structure: SplitReport,
    pub stronger: StrongerReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bruteforce: Option<AxiomResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaSection {
    pub aut_order: usize,
    pub out_order: usize,
    pub normalizing_automorphisms: usize,
    pub checks: Vec<AxiomResult>,
    pub kernel: KernelReport,
    pub centralizing: CentralizingReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureBlock {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub task: Option<String>,
}

/// One run on one group and prime. Field order is the serialization order.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: String,
    pub version: String,
    pub prime: u32,
    pub objects: String,
    pub tasks: Vec<String>,
    pub oracle: bool,
    pub caps: Caps,
    pub group: Option<GroupBlock>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classify: Option<ClassifyBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linking: Option<SystemBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transporter: Option<SystemBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locality: Option<LocalitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roundtrip: Option<RoundtripSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lim1: Option<CohomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out0: Option<Out0Section>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<FailureBlock>,
    /// `block/check` for every failing verdict.
    pub failures: Vec<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidPermutation(_) => "InvalidPermutation",
        Error::ClosureTooLarge { .. } | Error::TooLarge { .. } => "TooLarge",
        Error::NotASubgroup(_) => "NotASubgroup",
        Error::NotAPGroup(_) => "NotAPGroup",
        Error::NotFullyNormalized => "NotFullyNormalized",
        Error::BadObjectSet(_) => "BadObjectSet",
        Error::NoSuchRestriction(_) => "NoSuchRestriction",
        Error::NoSuchExtension(_) => "NoSuchExtension",
        Error::NotATransporterSystem(_) => "NotATransporterSystem",
        Error::NotACocycle(_) => "NotACocycle",
        Error::SearchSpaceTooLarge { .. } => "SearchSpaceTooLarge",
        Error::Overflow(_) => "Overflow",
        Error::Parse { .. } => "Parse",
        Error::Io(_) => "Io",
    }
}

impl RunReport {
    fn empty(opts: &RunOptions) -> RunReport {
        RunReport {
            schema: SCHEMA.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            prime: opts.prime,
            objects: objects_name(opts.objects).into(),
            tasks: opts.tasks.iter().map(|t| t.name().to_string()).collect(),
            oracle: opts.oracle,
            caps: opts.caps,
            group: None,
            warnings: Vec::new(),
            classify: None,
            linking: None,
            transporter: None,
            locality: None,
            roundtrip: None,
            lim1: None,
            out0: None,
            kappa: None,
            error: None,
            failures: Vec::new(),
            pass: false,
            timing_ms: None,
        }
    }

    fn fail(&mut self, e: &Error, task: Option<Task>) {
        self.error = Some(FailureBlock {
            kind: error_kind(e).into(),
            message: e.to_string(),
            task: task.map(|t| t.name().to_string()),
        });
    }

    /// Every verdict with its block name.
    pub fn verdicts(&self) -> Vec<(String, &AxiomResult)> {
        let mut out: Vec<(String, &AxiomResult)> = Vec::new();
        fn add<'a>(out: &mut Vec<(String, &'a AxiomResult)>, block: &str, rs: &'a [AxiomResult]) {
            out.extend(rs.iter().map(|r| (block.to_string(), r)));
        }
        if let Some(b) = &self.linking {
            add(&mut out, "linking", &b.checks);
        }
        if let Some(b) = &self.transporter {
            add(&mut out, "transporter", &b.checks);
        }
        if let Some(l) = &self.locality {
            add(&mut out, "group-locality", &l.group_locality.checks);
            add(&mut out, "linking-locality", &l.linking_locality.checks);
            if let Some(r) = l.restriction_to_centric.as_ref().filter(|r| r.hypothesis.pass) {
                add(&mut out, "restriction", &r.checks);
            }
        }
        if let Some(r) = &self.roundtrip {
            add(&mut out, "roundtrip-transporter", &r.transporter_category.checks);
            add(&mut out, "roundtrip-linking", &r.linking_system.checks);
            add(&mut out, "roundtrip-locality", &r.group_locality.checks);
        }
        if let Some(c) = &self.lim1 {
            add(&mut out, "lim1", &c.checks);
        }
        if let Some(o) = &self.out0 {
            add(&mut out, "out0", &o.aut0_checks);
            add(&mut out, "out0", &o.mu_checks);
            add(&mut out, "out0", &o.structure.checks);
            add(&mut out, "out0", std::slice::from_ref(&o.stronger.result));
            if let Some(b) = &o.bruteforce {
                add(&mut out, "out0", std::slice::from_ref(b));
            }
        }
        if let Some(k) = &self.kappa {
            add(&mut out, "kappa", &k.checks);
            add(&mut out, "kappa", &k.kernel.checks);
            if k.centralizing.hypothesis {
                add(&mut out, "kappa", &k.centralizing.checks);
            }
        }
        out
    }

    fn finish(mut self) -> RunReport {
        self.failures = self.verdicts().iter().filter(|(_, r)| !r.pass).map(|(b, r)| format!("{b}/{}", r.name)).collect();
        self.pass = self.error.is_none() && self.failures.is_empty();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn classify_block(f: &FusionSystem, c: &Classification) -> ClassifyBlock {
    let classes = c
        .classes
        .iter()
        .map(|class| {
            let rep = class[0];
            let fl = &c.flags[rep];
            let fnr = *class.iter().find(|&&q| c.flags[q].fully_normalized).unwrap_or(&rep);
            ClassRow {
                representative: f.describe_sub(rep),
                order: f.sub(rep).order(),
                size: class.len(),
                fully_normalized_rep: f.label(fnr),
                centric: fl.centric,
                radical: fl.radical,
                subcentric: fl.subcentric,
                essential_candidate: fl.essential_candidate,
            }
        })
        .collect();
    ClassifyBlock {
        subgroups: f.num_subgroups(),
        classes,
        centric: c.centric().len(),
        centric_radical: c.centric_radical().len(),
        subcentric: c.subcentric().len(),
    }
}

fn system_block(t: &TransporterSystem, char_p_counts: bool) -> SystemBlock {
    let mut checks = verify_transporter_axioms(t).results;
    let mut informational = Vec::new();
    let cp = check_characteristic_p(t);
    if char_p_counts {
        checks.push(cp);
    } else {
        informational.push(cp);
    }
    let kind = serde_json::to_value(t.kind()).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    SystemBlock { kind, objects: t.num_objects(), morphisms: t.num_morphisms(), checks, informational }
}

fn locality_block(kind: &str, l: &Locality, char_p_counts: bool) -> LocalityBlock {
    let mut checks = verify_locality(l);
    let mut informational = Vec::new();
    let cp = check_normalizers_characteristic_p(l);
    if char_p_counts {
        checks.push(cp);
    } else {
        informational.push(cp);
    }
    LocalityBlock { kind: kind.into(), objects: l.objects().len(), carrier: l.len(), checks, informational }
}

/// Runs the requested tasks on a group; errors land in the failure block.
pub fn run_group(label: &str, group: FiniteGroup, opts: &RunOptions) -> RunReport {
    let mut r = RunReport::empty(opts);
    let mut current = None;
    if let Err(e) = pipeline(&mut r, label, group, opts, &mut current) {
        r.fail(&e, current);
    }
    r.finish()
}

/// Loads a group file and runs on it.
pub fn run_file(path: &Path, label: &str, opts: &RunOptions) -> RunReport {
    let start = std::time::Instant::now();
    let mut r = match load_group(path, Some(opts.caps.group)) {
        Ok(g) => run_group(label, g, opts),
        Err(e) => {
            let mut r = RunReport::empty(opts);
            r.fail(&e, None);
            r.finish()
        }
    };
    if opts.timing {
        r.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    r
}

fn pipeline(
    r: &mut RunReport,
    label: &str,
    group: FiniteGroup,
    opts: &RunOptions,
    current: &mut Option<Task>,
) -> Result<()> {
    let p = opts.prime;
    if p < 2 || (2..p).any(|d| p % d == 0) {
        return Err(Error::NotAPGroup(p));
    }
    if group.order() % p as usize != 0 {
        r.warnings.push(format!("{p} does not divide |G| = {}", group.order()));
    }
    let group = Arc::new(group);
    let f = Arc::new(FusionSystem::build(group.clone(), p)?);
    r.group = Some(GroupBlock {
        file: label.into(),
        degree: group.degree(),
        order: group.order(),
        generators: group.generators().iter().map(|&x| group.perm(x).to_string()).collect(),
        sylow_order: f.sylow().order(),
    });
    let has = |t: Task| opts.tasks.contains(&t);
    *current = Some(Task::Classify);
    let c = classify(&f)?;
    if has(Task::Classify) {
        r.classify = Some(classify_block(&f, &c));
    }
    let objects = object_set(&f, &c, opts.objects);
    let needs_centric = [Task::Lim1, Task::Out0, Task::Kappa, Task::Locality, Task::Roundtrip, Task::Linking];
    let centric_linking = if needs_centric.iter().any(|&t| has(t)) {
        *current = Some(Task::Linking);
        Some(build_linking(f.clone(), c.centric())?)
    } else {
        None
    };

    if has(Task::Linking) {
        *current = Some(Task::Linking);
        r.linking = Some(if opts.objects == ObjectChoice::Centric {
            system_block(centric_linking.as_ref().unwrap(), true)
        } else {
            system_block(&build_linking(f.clone(), objects.clone())?, false)
        });
        let tc = build_transporter(f.clone(), objects.clone())?;
        r.transporter = Some(system_block(&tc, false));
    }

    let mut group_locality = None;
    if has(Task::Locality) || has(Task::Roundtrip) {
        *current = Some(Task::Locality);
        group_locality = Some(build_group_locality(f.clone(), &c, objects.clone())?);
    }
    if has(Task::Locality) {
        let gl = group_locality.as_ref().unwrap();
        let ll = lambda(centric_linking.as_ref().unwrap())?;
        let restriction_to_centric = if opts.objects != ObjectChoice::Centric && opts.oracle {
            let small = restrict_locality(gl, &c, c.centric())?;
            Some(restriction_isomorphism(gl, &small, opts.caps.search_nodes)?)
        } else {
            None
        };
        r.locality = Some(LocalitySection {
            group_locality: locality_block("group", gl, false),
            linking_locality: locality_block("from-linking-system", &ll, true),
            restriction_to_centric,
        });
    }
    if has(Task::Roundtrip) {
        *current = Some(Task::Roundtrip);
        let tc = build_transporter(f.clone(), objects.clone())?;
        r.roundtrip = Some(RoundtripSection {
            transporter_category: roundtrip_transporter(&tc)?,
            linking_system: roundtrip_transporter(centric_linking.as_ref().unwrap())?,
            group_locality: roundtrip_locality(group_locality.as_ref().unwrap())?,
        });
    }

    if has(Task::Lim1) || has(Task::Out0) {
        *current = Some(Task::Lim1);
        let cd = cohom::compute(f.clone(), c.centric())?;
        if has(Task::Lim1) {
            r.lim1 = Some(cd.report_bounded(opts.oracle, opts.caps.brute)?);
        }
        if has(Task::Out0) {
            *current = Some(Task::Out0);
            let t = centric_linking.as_ref().unwrap();
            let table = compute_aut0(t, &cd)?;
            let bruteforce = if opts.oracle {
                match cross_check_bruteforce(t, &table, opts.caps.search_nodes) {
                    Ok(a) => Some(a),
                    Err(Error::SearchSpaceTooLarge { .. }) => {
                        r.warnings.push("exhaustive rigid-automorphism search exceeded its node cap".into());
                        None
                    }
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            r.out0 = Some(Out0Section {
                aut0_checks: table.checks.clone(),
                mu_checks: check_mu(t, &table)?,
                structure: verify_exponent_and_split(t, &table)?,
                stronger: remark_stronger_check(t, &table)?,
                bruteforce,
            });
        }
    }

    if has(Task::Kappa) {
        *current = Some(Task::Kappa);
        let t = centric_linking.as_ref().unwrap();
        let aut = automorphism_group_capped(&group, opts.caps.aut)?;
        let kd = kappa_tilde(t, &aut)?;
        let kernel = kappa_kernel(t, &aut, &kd)?;
        let centralizing = centralizing_aut_structure(t, &aut, &kd, &kernel)?;
        r.kappa = Some(KappaSection {
            aut_order: aut.group.order(),
            out_order: aut.out_order(),
            normalizing_automorphisms: kd.domain.len(),
            checks: kd.checks,
            kernel,
            centralizing,
        });
    }
    *current = None;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub file: String,
    pub prime: u32,
}

/// Manifest lines are `file prime`; blank lines and `#` comments are skipped.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse { line: k + 1, msg: "expected `group-file prime`".into() };
        if fields.len() != 2 {
            return Err(bad());
        }
        let prime = fields[1].parse().map_err(|_| bad())?;
        out.push(ManifestEntry { file: fields[0].into(), prime });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogRow {
    pub file: String,
    pub prime: u32,
    /// `pass`, `fail`, `too-large` or `error`.
    pub status: String,
    pub summary: String,
    pub report: RunReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub schema: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<u32>,
    pub rows: Vec<CatalogRow>,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

impl CatalogReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One text line per row plus the aggregate line.
    pub fn table(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            s += &format!("{:<16} p={:<2} {:<9} {}\n", row.file, row.prime, row.status, row.summary);
        }
        s += &format!("{} passed, {} failed\n", self.passed, self.failed);
        s
    }
}

fn row_summary(r: &RunReport) -> String {
    if let Some(e) = &r.error {
        return format!("{}: {}", e.kind, e.message);
    }
    let mut parts = Vec::new();
    if let Some(g) = &r.group {
        parts.push(format!("|G|={} |S|={}", g.order, g.sylow_order));
    }
    if let Some(c) = &r.lim1 {
        parts.push(format!("lim1=[{}] lim0=[{}]", c.lim1_invariants.join(","), c.lim0_invariants.join(",")));
    }
    if let Some(o) = &r.out0 {
        parts.push(format!("|Aut0|={} |AutZ|={}", o.structure.aut0_order, o.structure.autz_order));
    }
    if let Some(k) = &r.kappa {
        parts.push(format!("|Out(G)|={} |ker|={}", k.out_order, k.kernel.kernel_order));
    }
    if !r.failures.is_empty() {
        parts.push(format!("failing: {}", r.failures.join(" ")));
    }
    parts.join(" ")
}

/// Runs every manifest row in parallel; rows keep manifest order. Group files are
/// resolved relative to `base`.
pub fn run_catalog(base: &Path, entries: &[ManifestEntry], opts: &RunOptions, theorem: Option<u32>) -> CatalogReport {
    let rows: Vec<CatalogRow> = entries
        .par_iter()
        .map(|e| {
            let mut o = opts.clone();
            o.prime = e.prime;
            let report = run_file(&base.join(&e.file), &e.file, &o);
            let status = match &report.error {
                Some(f) if f.kind == "TooLarge" => "too-large",
                Some(_) => "error",
                None if report.pass => "pass",
                None => "fail",
            };
            CatalogRow {
                file: e.file.clone(),
                prime: e.prime,
                status: status.into(),
                summary: row_summary(&report),
                report,
            }
        })
        .collect();
    let passed = rows.iter().filter(|r| r.report.pass).count();
    let failed = rows.len() - passed;
    CatalogReport {
        schema: CATALOG_SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        theorem,
        rows,
        passed,
        failed,
        pass: failed == 0,
    }
}
