//! Formula-versus-oracle sweeps over `(family, n, k)` grids.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{self, FamilyParams, Invariant};
use crate::graph::{Family, LeveledTree, MAX_TREE_VERTICES};
use crate::hochster::{self, HochsterOptions, DEFAULT_HOCHSTER_CAP};
use crate::oracles::{self, DEFAULT_ENUM_CAP, EXHAUSTIVE_EDGE_CAP};
use crate::sdepth::{self, DEFAULT_SDEPTH_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Oracle {
    Formulas,
    Combinatorial,
    Hochster,
    Sdepth,
}

impl Oracle {
    pub const ALL: [Oracle; 4] = [
        Oracle::Formulas,
        Oracle::Combinatorial,
        Oracle::Hochster,
        Oracle::Sdepth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Oracle::Formulas => "formulas",
            Oracle::Combinatorial => "combinatorial",
            Oracle::Hochster => "hochster",
            Oracle::Sdepth => "sdepth",
        }
    }
}

/// Parses a comma-separated list of oracle names; `all` selects every oracle.
pub fn parse_oracles(s: &str) -> Result<BTreeSet<Oracle>> {
    let mut out = BTreeSet::new();
    for part in s.split(',').map(str::trim) {
        match part {
            "all" => out.extend(Oracle::ALL),
            "formulas" => drop(out.insert(Oracle::Formulas)),
            "combinatorial" => drop(out.insert(Oracle::Combinatorial)),
            "hochster" => drop(out.insert(Oracle::Hochster)),
            "sdepth" => drop(out.insert(Oracle::Sdepth)),
            other => return Err(Error::domain(format!("unknown oracle {other:?}"))),
        }
    }
    Ok(out)
}

/// Parses `A..B` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Error::domain(format!("bad range bound {t:?} in {s:?}")))
    };
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.trim_start_matches('='))?,
        None => num(s)?..=num(s)?,
    };
    if r.is_empty() {
        return Err(Error::domain(format!("empty range {s:?}")));
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub hochster: usize,
    pub sdepth: usize,
    pub enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            hochster: DEFAULT_HOCHSTER_CAP,
            sdepth: DEFAULT_SDEPTH_CAP,
            enumeration: DEFAULT_ENUM_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

/// One comparison between a formula value and an oracle value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub invariant: String,
    pub oracle: String,
    pub formula: String,
    pub oracle_value: String,
    pub status: Status,
    pub millis: u128,
}

impl InvariantReport {
    fn key(&self) -> (Family, usize, usize, &str, &str) {
        (self.family, self.n, self.k, &self.invariant, &self.oracle)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub families: Vec<Family>,
    pub n_range: RangeInclusive<usize>,
    pub k_range: RangeInclusive<usize>,
    pub oracles: BTreeSet<Oracle>,
    pub caps: Caps,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationRun {
    pub config: VerifyConfig,
    pub reports: Vec<InvariantReport>,
}

impl VerificationRun {
    pub fn count(&self, status: Status) -> usize {
        self.reports.iter().filter(|r| r.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// 0 when every executed comparison agrees, 1 on any mismatch, 3 when
    /// caps left nothing to compare.
    pub fn exit_code(&self) -> i32 {
        if !self.passed() {
            1
        } else if self.count(Status::Pass) == 0 && self.count(Status::Skipped) > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = String::from("family,n,k,invariant,oracle,formula,oracle_value,status");
        out.push_str(if timing { ",millis\n" } else { "\n" });
        for r in &self.reports {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}",
                r.family, r.n, r.k, r.invariant, r.oracle, r.formula, r.oracle_value, r.status
            ));
            if timing {
                out.push_str(&format!(",{}", r.millis));
            }
            out.push('\n');
        }
        out
    }
}

struct Case {
    p: FamilyParams,
    caps: Caps,
    rows: Vec<InvariantReport>,
}

impl Case {
    fn row(&mut self, invariant: &str, oracle: &str, formula: impl ToString, value: Option<String>, started: Instant) {
        let formula = formula.to_string();
        let status = match &value {
            None => Status::Skipped,
            Some(v) if *v == formula => Status::Pass,
            Some(_) => Status::Fail,
        };
        self.rows.push(InvariantReport {
            family: self.p.family,
            n: self.p.n,
            k: self.p.k,
            invariant: invariant.into(),
            oracle: oracle.into(),
            formula,
            oracle_value: value.unwrap_or_else(|| "-".into()),
            status,
            millis: started.elapsed().as_millis(),
        });
    }

    /// Records an oracle result; resource caps mark the row skipped, other
    /// errors mark it failed.
    fn outcome<T: ToString>(
        &mut self,
        invariant: &str,
        oracle: &str,
        formula: &BigInt,
        r: Result<T>,
        started: Instant,
    ) {
        match r {
            Ok(v) => self.row(invariant, oracle, formula, Some(v.to_string()), started),
            Err(e) if e.is_resource_cap() => self.row(invariant, oracle, formula, None, started),
            Err(e) => self.row(
                invariant,
                oracle,
                formula,
                Some(format!("error: {e}").replace(',', ";")),
                started,
            ),
        }
    }

    fn formula(&self, inv: Invariant) -> Result<BigInt> {
        formulas::evaluate(&self.p, inv).map(|v| v.value)
    }

    fn identities(&mut self) -> Result<()> {
        let t = Instant::now();
        let depth = self.formula(Invariant::Depth)?;
        let pdim = self.formula(Invariant::Pdim)?;
        let count = self.formula(Invariant::Vertices)?;
        let dim = self.formula(Invariant::Dim)?;
        let sdepth = self.formula(Invariant::Sdepth)?;
        let levels = self
            .p
            .family
            .vertex_count(self.p.n, self.p.k)
            .map_or_else(|| "overflow".to_string(), |c| c.to_string());
        self.row("vertices", "level-sum", &count, Some(levels), t);
        self.row("depth+pdim", "vertices", &count, Some((&depth + &pdim).to_string()), t);
        self.row("sdepth", "depth", &sdepth, Some(depth.to_string()), t);
        let bounded = if depth <= dim { dim.clone() } else { depth.clone() };
        self.row("depth<=dim", "dim", &dim, Some(bounded.to_string()), t);
        Ok(())
    }

    fn size(&self) -> usize {
        self.p
            .family
            .vertex_count(self.p.n, self.p.k)
            .map_or(usize::MAX, |c| usize::try_from(c).unwrap_or(usize::MAX))
    }

    fn tree(&self, limit: usize) -> Option<LeveledTree> {
        let count = self.p.family.vertex_count(self.p.n, self.p.k)?;
        (count <= limit as u128).then(|| LeveledTree::build(self.p.family, self.p.n, self.p.k).ok())?
    }

    fn combinatorial(&mut self) -> Result<()> {
        let dim = self.formula(Invariant::Dim)?;
        let reg = self.formula(Invariant::Reg)?;
        let t0 = Instant::now();
        let Some(tree) = self.tree(MAX_TREE_VERTICES as usize) else {
            for (inv, oracle, f) in [
                ("dim", "forest-dp", &dim),
                ("reg", "forest-dp", &reg),
                ("reg", "matching", &reg),
            ] {
                self.row(inv, oracle, f, None, t0);
            }
            return Ok(());
        };
        let g = tree.graph();
        let t = Instant::now();
        self.outcome("dim", "forest-dp", &dim, oracles::independence_number_forest(g), t);
        let t = Instant::now();
        self.outcome("reg", "forest-dp", &reg, oracles::induced_matching_number_forest(g), t);
        let t = Instant::now();
        let m = oracles::build_level_matching(&tree);
        let value = if oracles::is_induced_matching(g, &m) {
            m.len().to_string()
        } else {
            format!("not induced ({})", m.len())
        };
        self.row("reg", "matching", &reg, Some(value), t);

        let small = g.vertex_count() <= self.caps.enumeration;
        let t = Instant::now();
        let alpha = small.then(|| oracles::independence_number_exhaustive(g));
        match alpha {
            Some(r) => self.outcome("dim", "exhaustive", &dim, r, t),
            None => self.row("dim", "exhaustive", &dim, None, t),
        }
        let t = Instant::now();
        let indmat =
            (small && g.edge_count() <= EXHAUSTIVE_EDGE_CAP).then(|| oracles::induced_matching_number_exhaustive(g));
        match indmat {
            Some(r) => self.outcome("reg", "exhaustive", &reg, r, t),
            None => self.row("reg", "exhaustive", &reg, None, t),
        }
        Ok(())
    }

    fn hochster(&mut self) -> Result<()> {
        let want = [
            ("pdim", self.formula(Invariant::Pdim)?),
            ("reg", self.formula(Invariant::Reg)?),
            ("depth", self.formula(Invariant::Depth)?),
        ];
        let t = Instant::now();
        let result = match self.tree(self.caps.hochster) {
            None => Err(Error::ResourceCap {
                what: "graph vertex count for Hochster's formula",
                size: self.size(),
                cap: self.caps.hochster,
            }),
            Some(tree) => {
                let opts = HochsterOptions {
                    cap: self.caps.hochster,
                    ..Default::default()
                };
                hochster::betti_table_with(tree.graph(), opts)
                    .and_then(|run| hochster::invariants_from_betti(&run.table, tree.graph().vertex_count()))
            }
        };
        for (name, formula) in &want {
            let value = result.as_ref().map_err(Clone::clone).map(|inv| match *name {
                "pdim" => inv.pdim,
                "reg" => inv.reg,
                _ => inv.depth,
            });
            self.outcome(name, "hochster", formula, value, t);
        }
        Ok(())
    }

    fn sdepth(&mut self) -> Result<()> {
        let formula = self.formula(Invariant::Sdepth)?;
        let t = Instant::now();
        let value = match self.tree(self.caps.sdepth) {
            None => Err(Error::ResourceCap {
                what: "face poset vertex count",
                size: self.size(),
                cap: self.caps.sdepth,
            }),
            Some(tree) => sdepth::sdepth_with_witness(tree.graph(), self.caps.sdepth).map(|(d, _)| d),
        };
        self.outcome("sdepth", "stanley", &formula, value, t);
        Ok(())
    }
}

fn run_case(p: FamilyParams, oracles: &BTreeSet<Oracle>, caps: Caps) -> Vec<InvariantReport> {
    let mut case = Case {
        p,
        caps,
        rows: Vec::new(),
    };
    for oracle in oracles {
        let r = match oracle {
            Oracle::Formulas => case.identities(),
            Oracle::Combinatorial => case.combinatorial(),
            Oracle::Hochster => case.hochster(),
            Oracle::Sdepth => case.sdepth(),
        };
        if let Err(e) = r {
            let t = Instant::now();
            case.row(
                "formula",
                oracle.name(),
                "ok",
                Some(format!("error: {e}").replace(',', ";")),
                t,
            );
        }
    }
    case.rows
}

/// Runs every enabled oracle on every case; rows come back sorted.
pub fn run_verification(config: &VerifyConfig) -> Result<VerificationRun> {
    if *config.n_range.start() < 3 {
        return Err(Error::domain(format!(
            "n must be at least 3, got {}",
            config.n_range.start()
        )));
    }
    if config.oracles.is_empty() {
        return Err(Error::domain("no oracles selected"));
    }
    let mut cases = Vec::new();
    for &family in &config.families {
        for n in config.n_range.clone() {
            for k in config.k_range.clone() {
                cases.push(FamilyParams::new(family, n, k)?);
            }
        }
    }
    let mut reports: Vec<InvariantReport> = cases
        .into_par_iter()
        .flat_map_iter(|p| run_case(p, &config.oracles, config.caps))
        .collect();
    reports.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(VerificationRun {
        config: config.clone(),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(families: &[Family], n: RangeInclusive<usize>, k: RangeInclusive<usize>, oracles: &str) -> VerifyConfig {
        VerifyConfig {
            families: families.to_vec(),
            n_range: n,
            k_range: k,
            oracles: parse_oracles(oracles).unwrap(),
            caps: Caps::default(),
        }
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_range("3..5").unwrap(), 3..=5);
        assert_eq!(parse_range("4").unwrap(), 4..=4);
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("a..3").is_err());
        assert_eq!(parse_oracles("all").unwrap().len(), 4);
        assert_eq!(parse_oracles("hochster,sdepth").unwrap().len(), 2);
        assert!(parse_oracles("magic").is_err());
    }

    #[test]
    fn full_sweep_all_oracles() {
        let run = run_verification(&config(&[Family::Full], 3..=4, 1..=2, "all")).unwrap();
        assert!(run.passed(), "{}", run.to_csv(false));
        assert_eq!(run.exit_code(), 0);
        assert!(run.count(Status::Pass) > 20);
    }

    #[test]
    fn ary_hochster_only() {
        let run = run_verification(&config(&[Family::Ary], 3..=3, 1..=3, "hochster")).unwrap();
        assert_eq!(run.reports.len(), 9);
        assert_eq!(run.exit_code(), 0);
    }

    #[test]
    fn everything_over_cap_exits_3() {
        let mut c = config(&[Family::Full], 3..=3, 4..=4, "hochster");
        c.caps.hochster = 18;
        let run = run_verification(&c).unwrap();
        assert_eq!(run.count(Status::Skipped), 3);
        assert_eq!(run.exit_code(), 3);
    }

    #[test]
    fn csv_is_sorted_and_timing_optional() {
        let run = run_verification(&config(&[Family::Full, Family::Ary], 3..=3, 0..=1, "formulas")).unwrap();
        let csv = run.to_csv(false);
        assert!(csv.starts_with("family,n,k,invariant,oracle,formula,oracle_value,status\nfull,3,0,"));
        assert!(run.to_csv(true).lines().next().unwrap().ends_with(",millis"));
        let again = run_verification(&run.config).unwrap();
        assert_eq!(again.to_csv(false), csv);
    }

    #[test]
    fn mismatch_is_reported() {
        let mut case = Case {
            p: FamilyParams::new(Family::Full, 3, 2).unwrap(),
            caps: Caps::default(),
            rows: Vec::new(),
        };
        case.row("depth", "test", 3, Some("4".into()), Instant::now());
        let run = VerificationRun {
            config: config(&[Family::Full], 3..=3, 2..=2, "formulas"),
            reports: case.rows,
        };
        assert_eq!(run.exit_code(), 1);
    }

    #[test]
    fn bad_n_rejected() {
        assert!(run_verification(&config(&[Family::Full], 2..=3, 1..=1, "formulas")).is_err());
    }
}
