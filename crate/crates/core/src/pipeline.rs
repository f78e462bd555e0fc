//! End-to-end analysis of one input: polytope, conifold data, Hodge numbers,
//! topology and optionally the Picard–Fuchs operator and instanton numbers.

use crate::conifold::{self, hodge_resolved, hodge_smoothed, ConifoldError};
use crate::gw::gw_pipeline;
use crate::io::{integer_strings, parse_input, InputFile, InputKind, IoError, Orientation, Report, Role};
use crate::period::{principal_period, support_from_polytope, Support};
use crate::pfops::fit_operator_with_stride;
use crate::polytope::{LatticePolytope, ReflexivePair};
use crate::topology::topology_data;
use crate::Error;

/// Largest operator degree tried when an operator is requested.
pub const DEFAULT_DMAX: usize = 6;

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    /// Overrides the `# role:` directive.
    pub role: Option<Role>,
    /// Overrides the `# multiplicity:` directive.
    pub multiplicity: Option<i64>,
    pub orientation: Orientation,
    /// Fit a Picard–Fuchs operator from a period series of this many terms.
    pub period_order: Option<usize>,
    /// Number of instanton numbers to compute once an operator is known.
    pub instantons: Option<usize>,
}

/// Parses and analyzes a file's contents. Domain failures are recorded in
/// `Report::error`; only parse errors are returned as `Err`.
pub fn analyze_text(source: &str, text: &str, opts: &AnalyzeOptions) -> Result<Report, IoError> {
    let input = parse_input(text, opts.orientation)?;
    Ok(analyze_input(source, &input, opts))
}

pub fn analyze_input(source: &str, input: &InputFile, opts: &AnalyzeOptions) -> Report {
    let role = opts.role.or(input.role).unwrap_or_default();
    let multiplicity = opts.multiplicity.or(input.multiplicity).unwrap_or(1);
    let mut report = Report { source: source.to_string(), role, ..Report::default() };
    if let Err(e) = fill(&mut report, input, role, multiplicity, opts) {
        report.error = Some(e);
    }
    report
}

fn fill(report: &mut Report, input: &InputFile, role: Role, m: i64, opts: &AnalyzeOptions) -> Result<(), String> {
    let poly = LatticePolytope::from_points(&input.points).map_err(|e| e.to_string())?;
    report.vertices = poly.vertices().len();
    report.reflexive = Some(poly.is_reflexive());
    if !poly.is_reflexive() {
        return Err("polytope is not reflexive".into());
    }
    let pair = match role {
        Role::Delta => ReflexivePair::new(poly),
        Role::Dual => ReflexivePair::from_dual(poly),
    }
    .map_err(|e| e.to_string())?;
    report.dual_vertices = Some(pair.dual.vertices().len());
    report.facet_interior_point = Some(pair.delta.has_facet_interior_point());
    let resolved = hodge_resolved(&pair);
    report.hodge_resolved = Some([resolved.h11, resolved.h21]);

    let conifold = match conifold::analyze(&pair) {
        Ok(c) => c,
        Err(ConifoldError::NotAdmissible) => {
            report.admissible = Some(false);
            return Ok(());
        }
        Err(e) => return Err(e.to_string()),
    };
    report.admissible = Some(true);
    report.smoothable = Some(conifold.smoothable);
    report.p = Some(conifold.p());
    report.dp = Some(conifold.dp);
    report.rk = Some(conifold.rk);
    if !conifold.smoothable {
        return Ok(());
    }
    let hodge = hodge_smoothed(resolved, conifold.rk, conifold.dp);
    report.hodge_smoothed = Some([hodge.h11_smoothed, hodge.h21_smoothed]);
    if hodge.h11_smoothed != 1 {
        return Ok(());
    }

    let topo = topology_data(&pair.delta, m, &hodge).map_err(|e| e.to_string())?;
    report.h_cubed = Some(topo.h_cubed);
    report.c2_h = Some(topo.c2_h);
    report.c3 = Some(topo.c3);
    report.ind = Some(topo.ind);
    report.multiplicity = Some(topo.multiplicity);

    let Some(order) = opts.period_order else { return Ok(()) };
    let series = principal_period(&support_from_polytope(&pair.dual), order);
    let fit = fit_operator_with_stride(&series, DEFAULT_DMAX).map_err(|e| e.to_string())?;
    report.operator = Some(fit.operator.to_table());
    report.operator_text = Some(fit.operator.to_text());
    report.stride = Some(fit.stride);
    if let Some(n) = opts.instantons {
        let gw = gw_pipeline(&fit.operator, topo.h_cubed, n).map_err(|e| e.to_string())?;
        report.instantons = Some(integer_strings(&gw.instantons));
    }
    Ok(())
}

/// Monomials whose constant-term series is the principal period: a Laurent
/// input in the dual role is used as written; otherwise the vertices of
/// `Δ°` are taken.
pub fn period_support(input: &InputFile, role: Role) -> Result<Support, Error> {
    if input.kind == InputKind::Laurent && role == Role::Dual {
        return Ok(Support::new(input.points.clone())?);
    }
    let poly = LatticePolytope::from_points(&input.points)?;
    let dual = match role {
        Role::Delta => poly.polar_dual()?,
        Role::Dual => poly,
    };
    Ok(support_from_polytope(&dual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn quintic_report() {
        let r = analyze_text("q", samples::QUINTIC_NEWTON, &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.error, None);
        assert_eq!(r.admissible, Some(true));
        assert_eq!(r.smoothable, Some(true));
        assert_eq!(r.p, Some(0));
        assert_eq!(r.hodge_smoothed, Some([1, 101]));
        assert_eq!((r.h_cubed, r.c2_h, r.c3), (Some(5), Some(50), Some(-200)));
    }

    #[test]
    fn role_override_swaps_the_pair() {
        let opts = AnalyzeOptions { role: Some(Role::Dual), ..Default::default() };
        let r = analyze_text("q", samples::QUINTIC_NEWTON, &opts).unwrap();
        assert_eq!(r.hodge_resolved, Some([101, 1]));
        assert_eq!(r.h_cubed, None);
    }

    #[test]
    fn non_reflexive_input() {
        let r = analyze_text("x", "t1 + t2 + t3 + t4 + t1^-3*t2^-3*t3^-3*t4^-3", &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.reflexive, Some(false));
        assert!(r.error.is_some());
        assert_eq!(r.admissible, None);
    }

    #[test]
    fn quintic_operator_and_instantons() {
        let opts = AnalyzeOptions { period_order: Some(60), instantons: Some(2), ..Default::default() };
        let r = analyze_text("q", samples::P4_FAN, &opts).unwrap();
        assert_eq!(r.error, None, "{r:?}");
        assert_eq!(r.stride, Some(5));
        assert_eq!(r.instantons, Some(vec!["2875".to_string(), "609250".to_string()]));
    }

    #[test]
    fn supports_by_role() {
        let newton = parse_input(samples::QUINTIC_NEWTON, Orientation::Auto).unwrap();
        let fan = parse_input(samples::P4_FAN, Orientation::Auto).unwrap();
        let a = period_support(&newton, Role::Delta).unwrap();
        let b = period_support(&fan, Role::Dual).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        let s44 = parse_input(samples::S44A, Orientation::Auto).unwrap();
        assert_eq!(period_support(&s44, Role::Dual).unwrap().monomials(), &s44.points[..]);
    }
}
