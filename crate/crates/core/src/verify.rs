//! Both sides of each generating-function identity, computed along separate
//! paths and compared coefficient by coefficient.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::description::Module;
use crate::error::{Error, Result};
use crate::graded::ext::check_homological_dimension;
use crate::graded::{box_module_of_ideal, curve_ideal, ext1, ideal_presentation, matlis_dual, BoxModule, CurveProfile};
use crate::oracle::{oracle_series, OracleConfig, OracleSource};
use crate::quot::{colored_quot_series, enumerate_quotients_with_workers, quot_series};
use crate::series::{macmahon, FinitePoly, TruncSeries};

fn as_strings<S: Serializer>(v: &[i128], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub order: usize,
    #[serde(serialize_with = "as_strings")]
    pub lhs: Vec<i128>,
    #[serde(serialize_with = "as_strings")]
    pub rhs: Vec<i128>,
    #[serde(rename = "match")]
    pub matches: bool,
    pub first_mismatch: Option<i64>,
    /// Highest compared exponent when it is below `order`.
    pub clipped_at: Option<usize>,
    pub notes: Vec<String>,
}

impl IdentityReport {
    /// Compares two ordinary series on their common range `0..=hi`.
    pub fn from_series(identity: &str, order: usize, lhs: &TruncSeries, rhs: &TruncSeries, notes: Vec<String>) -> Self {
        let diff = lhs.compare(rhs);
        let hi = diff.hi.max(-1);
        let read = |s: &TruncSeries| (0..=hi).map(|k| s.coeff(k).unwrap_or(0)).collect();
        IdentityReport {
            identity: identity.to_string(),
            order,
            lhs: read(lhs),
            rhs: read(rhs),
            matches: diff.matches() && hi >= 0,
            first_mismatch: diff.first_mismatch,
            clipped_at: (hi < order as i64).then_some(hi.max(0) as usize),
            notes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "identity  {}", self.identity)?;
        writeln!(f, "order     {}", self.order)?;
        if let Some(c) = self.clipped_at {
            writeln!(f, "clipped   {c}")?;
        }
        writeln!(f, "{:>4}  {:>20}  {:>20}", "n", "lhs", "rhs")?;
        for (n, (l, r)) in self.lhs.iter().zip(&self.rhs).enumerate() {
            let mark = if l == r { "" } else { "  <-" };
            writeln!(f, "{n:>4}  {l:>20}  {r:>20}{mark}")?;
        }
        writeln!(f, "match     {}", if self.matches { "yes" } else { "no" })?;
        if let Some(k) = self.first_mismatch {
            writeln!(f, "first mismatch at q^{k}")?;
        }
        for note in &self.notes {
            writeln!(f, "note      {note}")?;
        }
        Ok(())
    }
}

/// Quot series of a box model, falling back to point counting when the
/// model has multiplicities. Returns the series and a provenance note.
fn quot_side(
    boxes: &BoxModule,
    fallback: OracleSource<'_>,
    order: usize,
    config: &OracleConfig,
    what: &str,
) -> Result<(TruncSeries, String)> {
    if boxes.is_multiplicity_free() {
        let s = quot_series(boxes, order)?;
        return Ok((s, format!("{what}: order-ideal enumeration on {} boxes", boxes.len())));
    }
    let s = oracle_series(fallback, order, config)?;
    Ok((
        s,
        format!(
            "{what}: point counts over F_p for p in {:?}, counting polynomial evaluated at p = 1 (n <= {})",
            config.primes,
            order.min(config.n_max)
        ),
    ))
}

/// `sum e(Quot(M, n)) q^n = M(q)^r sum e(Quot(Ext^1(M, A), n)) q^n`.
pub fn check_main(module: &Module, order: usize, config: &OracleConfig) -> Result<IdentityReport> {
    let pres = module.presentation()?;
    check_homological_dimension(&pres)?;
    let rank = module.rank()?;
    if rank < 1 {
        return Err(Error::InvalidArgument(format!("module has rank {rank}; a torsion-free module of positive rank is required")));
    }
    let bound = order.max(1);
    let m = module.box_module(bound)?;
    let (lhs, lhs_note) = quot_side(&m, OracleSource::Cokernel(&pres), order, config, "lhs")?;
    let e = module.ext1(bound)?;
    let (pt, rhs_note) = quot_side(&e, OracleSource::Ext1(&pres), order, config, "Ext^1 series")?;
    let rhs = macmahon(order as i64, rank as u32)?.mul(&pt)?;
    let notes = vec![
        format!("rank {rank}"),
        lhs_note,
        rhs_note,
        format!("rhs: MacMahon^{rank} from the product formula times the Ext^1 series"),
    ];
    Ok(IdentityReport::from_series("main", order, &lhs, &rhs, notes))
}

/// DT series of a curve against `M(q)` times its PT series.
pub fn check_dtpt(profile: &CurveProfile, order: usize) -> Result<IdentityReport> {
    let ideal = curve_ideal(profile)?.ideal;
    let pres = ideal_presentation(&ideal)?;
    check_homological_dimension(&pres)?;
    let bound = order.max(1);
    let dt = quot_series(&box_module_of_ideal(&ideal, bound)?, order)?;
    let pt = quot_series(&ext1(&pres, bound)?, order)?;
    let rhs = macmahon(order as i64, 1)?.mul(&pt)?;
    let notes = vec![
        format!("curve ideal {ideal}"),
        "lhs: monomial ideals of finite colength inside the curve ideal".into(),
        format!("PT series: {pt}"),
        "rhs: MacMahon times the Quot series of Ext^1 of the curve ideal".into(),
    ];
    Ok(IdentityReport::from_series("dtpt", order, &dt, &rhs, notes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorReport {
    pub report: IdentityReport,
    pub p_r: FinitePoly,
    pub p_rstar: FinitePoly,
    /// Set when the rank is 2.
    pub palindromic: Option<bool>,
}

fn finite_poly(e: &BoxModule) -> Result<FinitePoly> {
    if !e.is_finite() {
        return Err(Error::ExtNotFinite);
    }
    let d = e.len();
    FinitePoly::from_series(&quot_series(e, d)?, d)
}

/// Compares `P_E^*` with `P_{E*}` for two finite modules.
pub fn check_cor_modules(e: &BoxModule, estar: &BoxModule, rank: Option<i64>) -> Result<CorReport> {
    let p_r = finite_poly(e)?;
    let p_rstar = finite_poly(estar)?;
    let recip = p_r.reciprocal();
    let d = e.len().max(estar.len());
    let mut notes = vec![format!("P_R = {p_r}"), format!("P_R* = {p_rstar}"), "lhs: reciprocal of P_R".into()];
    let palindromic = (rank == Some(2)).then(|| p_r.is_palindromic());
    if let Some(p) = palindromic {
        notes.push(format!("rank 2, P_R palindromic: {p}"));
    }
    let lhs = TruncSeries::from_coeffs(recip.coeffs().to_vec(), d as i64);
    let rhs = TruncSeries::from_coeffs(p_rstar.coeffs().to_vec(), d as i64);
    let mut report = IdentityReport::from_series("cor", d, &lhs, &rhs, notes);
    if e.len() != estar.len() {
        report.matches = false;
        report.notes.push(format!("lengths differ: {} vs {}", e.len(), estar.len()));
    }
    Ok(CorReport { report, p_r, p_rstar, palindromic })
}

pub fn check_cor(r: &Module, rstar: &Module) -> Result<CorReport> {
    let e = r.ext1(1)?;
    let estar = rstar.ext1(1)?;
    check_cor_modules(&e, &estar, Some(r.rank()?))
}

/// `#Quot(E, n) = #Quot(E^D, d - n)` for a finite module of length `d`.
pub fn check_dual(e: &BoxModule, workers: usize) -> Result<IdentityReport> {
    if !e.is_finite() {
        return Err(Error::Truncated("check-dual"));
    }
    let dual = matlis_dual(e)?;
    let d = e.len();
    let lhs = quot_series(e, d)?;
    let rhs_counts = (0..=d)
        .map(|n| enumerate_quotients_with_workers(&dual, d - n, workers).map(|q| q.len() as i128))
        .collect::<Result<Vec<_>>>()?;
    let rhs = TruncSeries::from_coeffs(rhs_counts, d as i64);
    let notes = vec![
        format!("length {d}, dual length {}", dual.len()),
        "lhs: #Quot(E, n) by memoized counting".into(),
        "rhs: #Quot(E^D, d - n) by enumeration".into(),
    ];
    let mut report = IdentityReport::from_series("dual", d, &lhs, &rhs, notes);
    if dual.len() != d {
        report.matches = false;
    }
    Ok(report)
}

/// Colored Quot series of `A^r` against `M(q)^r`.
pub fn check_locfree(rank: usize, order: usize) -> Result<IdentityReport> {
    let lhs = colored_quot_series(rank, order)?;
    let rhs = macmahon(order as i64, rank as u32)?;
    let notes = vec![
        format!("lhs: order ideals in {rank} colored copies of the box model of A"),
        format!("rhs: product formula with exponent {rank}"),
    ];
    Ok(IdentityReport::from_series("locfree", order, &lhs, &rhs, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::description::fixture;
    use crate::graded::ModuleBox;

    fn module(name: &str) -> Module {
        fixture(name).unwrap().resolve().unwrap()
    }

    #[test]
    fn locfree_examples() {
        let r = check_locfree(1, 6).unwrap();
        assert!(r.matches);
        assert_eq!(r.lhs, [1, 1, 3, 6, 13, 24, 48]);
        assert_eq!(check_locfree(3, 3).unwrap().rhs, [1, 3, 12, 37]);
        assert_eq!(check_locfree(1, 0).unwrap().lhs, [1]);
    }

    #[test]
    fn dtpt_line() {
        let m = module("line");
        let r = check_dtpt(m.curve_profile().unwrap(), 5).unwrap();
        assert!(r.matches, "{r}");
        assert_eq!(r.lhs, [1, 2, 5, 11, 24, 48]);
    }

    #[test]
    fn dtpt_other_curves() {
        for name in ["two-axes", "fat-line"] {
            let m = module(name);
            let r = check_dtpt(m.curve_profile().unwrap(), 4).unwrap();
            assert!(r.matches, "{r}");
        }
    }

    #[test]
    fn main_examples() {
        let cfg = OracleConfig::default();
        let free = check_main(&module("free-r2"), 4, &cfg).unwrap();
        assert!(free.matches);
        assert_eq!(free.lhs, [1, 2, 7, 18, 47]);
        assert_eq!(free.lhs, check_locfree(2, 4).unwrap().lhs);
        assert!(check_main(&module("lines-sum"), 4, &cfg).unwrap().matches);
        assert!(check_main(&module("free-plus-line"), 4, &cfg).unwrap().matches);
    }

    #[test]
    fn main_reflexive_clipped() {
        let cfg = OracleConfig { n_max: 2, ..Default::default() };
        let r = check_main(&module("rank2-R"), 4, &cfg).unwrap();
        assert!(r.matches, "{r}");
        assert_eq!(r.lhs, [1, 3, 9]);
        assert_eq!(r.clipped_at, Some(2));
    }

    #[test]
    fn main_hd_error() {
        let err = check_main(&module("bad-hd2"), 3, &OracleConfig::default()).unwrap_err();
        assert!(err.to_string().contains("hd exceeds 1"));
    }

    #[test]
    fn cor_reflexive() {
        let r = module("rank2-R");
        let c = check_cor(&r, &r).unwrap();
        assert_eq!(c.p_r.coeffs(), [1, 1]);
        assert_eq!(c.palindromic, Some(true));
        assert!(c.report.matches);
        let free = module("free-r2");
        assert_eq!(check_cor(&free, &free).unwrap().p_r.coeffs(), [1]);
        assert!(matches!(check_cor(&module("line"), &module("line")), Err(Error::ExtNotFinite)));
    }

    #[test]
    fn cor_with_dual_partner() {
        let e = BoxModule::from_boxes_full_edges(vec![
            ModuleBox::new([0, 0, 0], 0),
            ModuleBox::new([1, 0, 0], 0),
            ModuleBox::new([0, 1, 0], 0),
        ])
        .unwrap();
        let c = check_cor_modules(&e, &matlis_dual(&e).unwrap(), None).unwrap();
        assert!(c.report.matches);
        assert_eq!(c.p_r.coeffs(), [1, 1, 2, 1]);
        assert_eq!(c.p_rstar.coeffs(), [1, 2, 1, 1]);
    }

    #[test]
    fn dual_examples() {
        let sky = module("skyscraper").box_module(1).unwrap();
        assert_eq!(check_dual(&sky, 1).unwrap().lhs, [1, 1]);
        let fat = module("fat-point").box_module(1).unwrap();
        assert_eq!(check_dual(&fat, 1).unwrap().lhs, [1, 1, 1]);
        let two = crate::graded::direct_sum(&[sky.clone(), sky]);
        let r = check_dual(&two, 2).unwrap();
        assert!(r.matches);
        assert_eq!(r.lhs, [1, 2, 1]);
        assert!(check_dual(&module("line").box_module(3).unwrap(), 1).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = check_locfree(1, 2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["lhs"], serde_json::json!(["1", "1", "3"]));
        assert_eq!(v["match"], true);
        assert!(v["first_mismatch"].is_null());
        assert!(v["clipped_at"].is_null());
    }
}
