//! Structured report serialization: a flat, self-describing key-value text
//! format with all integers written as decimal strings, so golden files stay
//! byte-identical across platforms and word sizes. CSV is a lossy export for
//! plotting.

use std::fmt::Display;

use crate::certify::{BoundCertificate, DimFit, TheoremReport};
use crate::field::FqElem;
use crate::geometry::LineRep;
use crate::morspace::CountSeries;
use crate::variety::{SingularPoint, VarietySpec};

pub const SCHEMA: &str = "ratcurve-report/1";

/// An ordered list of `key = value` lines under a schema header.
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut r = Report { lines: Vec::new() };
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(SCHEMA);
        out.push('\n');
        for (k, v) in &self.lines {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

fn point_str(spec: &VarietySpec, coords: &[FqElem]) -> String {
    coords
        .iter()
        .map(|&c| spec.field.fmt_elem(c))
        .collect::<Vec<_>>()
        .join(":")
}

/// Common header block for a spec.
pub fn push_spec(r: &mut Report, spec: &VarietySpec) {
    r.push("label", &spec.label);
    r.push("field", spec.field.literal());
    r.push("field.q", spec.field.q());
    let w: Vec<String> = spec.weights.iter().map(|x| x.to_string()).collect();
    r.push("weights", format!("[{}]", w.join(",")));
    r.push("dim.x", spec.dim_x());
    r.push("degree.total", spec.total_degree());
    r.push("bezout.c", spec.bezout_constant());
}

pub fn push_count_series(r: &mut Report, series: &CountSeries) {
    r.push("ext.m", series.m);
    r.push("ext.q", series.ext_q);
    r.push("strategy", series.strategy.name());
    r.push("exclusions", &series.exclusion_mode);
    for d in &series.degrees {
        let p = format!("degree.{}", d.e);
        r.push(&format!("{p}.raw"), d.raw);
        r.push(&format!("{p}.orbits"), d.orbits);
        r.push(&format!("{p}.orbit-size-sum"), d.orbit_size_sum);
        r.push(&format!("{p}.excluded-orbits"), d.excluded_orbits);
        r.push(&format!("{p}.n-u"), d.n_u);
    }
    for (e, c) in &series.cumulative {
        r.push(&format!("cumulative.{e}"), c);
    }
}

pub fn push_certificate(r: &mut Report, prefix: &str, cert: &BoundCertificate) {
    r.push(&format!("{prefix}.kind"), cert.kind.name());
    r.push(&format!("{prefix}.formula"), &cert.description);
    r.push(&format!("{prefix}.bound"), &cert.bound);
    r.push(&format!("{prefix}.measured"), cert.measured);
    r.push(&format!("{prefix}.pass"), cert.pass);
}

pub fn push_theorem_report(r: &mut Report, spec: &VarietySpec, report: &TheoremReport) {
    push_spec(r, spec);
    push_count_series(r, &report.series);
    for (i, cert) in report.per_degree.iter().enumerate() {
        push_certificate(r, &format!("bound.degree.{}", report.series.degrees[i].e), cert);
    }
    for (i, cert) in report.cumulative.iter().enumerate() {
        push_certificate(
            r,
            &format!("bound.cumulative.{}", report.series.degrees[i].e),
            cert,
        );
    }
    r.push("all-pass", report.all_pass());
}

pub fn push_lines(r: &mut Report, spec: &VarietySpec, ext: &VarietySpec, lines: &[LineRep]) {
    push_spec(r, spec);
    r.push("lines.count", lines.len());
    for (i, l) in lines.iter().enumerate() {
        r.push(
            &format!("lines.{i}"),
            format!(
                "[{} ; {}]",
                point_str(ext, &l.rows[0]),
                point_str(ext, &l.rows[1])
            ),
        );
    }
}

pub fn push_points(r: &mut Report, ext: &VarietySpec, key: &str, points: &[Vec<FqElem>]) {
    r.push(&format!("{key}.count"), points.len());
    for (i, p) in points.iter().enumerate() {
        r.push(&format!("{key}.{i}"), point_str(ext, p));
    }
}

pub fn push_singular_points(r: &mut Report, spec: &VarietySpec, points: &[SingularPoint]) {
    r.push("singular.count", points.len());
    for (i, p) in points.iter().enumerate() {
        // Render over the extension the point was found in.
        let (ext, _) = spec.base_change(p.m).expect("base change re-run");
        r.push(
            &format!("singular.{i}"),
            format!("m={} {}", p.m, point_str(&ext, &p.coords)),
        );
    }
}

pub fn push_dim_fit(r: &mut Report, fit: &DimFit) {
    for (i, (q, c)) in fit.samples.iter().enumerate() {
        r.push(&format!("fit.sample.{i}"), format!("q={q} count={c}"));
    }
    for (i, q) in fit.excluded_zero.iter().enumerate() {
        r.push(&format!("fit.excluded-zero.{i}"), q);
    }
    r.push("fit.slope", format!("{:.6}", fit.slope));
    r.push("fit.intercept", format!("{:.6}", fit.intercept));
    r.push("fit.residual", format!("{:.6}", fit.residual));
    r.push("fit.expected", format!("{:.6}", fit.expected));
    r.push("fit.tolerance", format!("{:.6}", fit.tolerance));
    r.push("fit.verdict", fit.verdict.name());
}

/// Lossy CSV export of a counting series.
pub fn series_to_csv(series: &CountSeries) -> String {
    let mut out = String::from("e,raw,orbits,excluded_orbits,n_u,cumulative\n");
    for (d, (_, cum)) in series.degrees.iter().zip(&series.cumulative) {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            d.e, d.raw, d.orbits, d.excluded_orbits, d.n_u, cum
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morspace::{count_points_bounded_height, EngineConfig};
    use crate::variety::preset;
    use std::sync::Arc;

    #[test]
    fn report_rendering_is_stable() {
        let mut r = Report::new("demo");
        r.push("alpha", 1);
        r.push("beta.gamma", "x");
        assert_eq!(
            r.render(),
            "ratcurve-report/1\ncommand = demo\nalpha = 1\nbeta.gamma = x\n"
        );
    }

    #[test]
    fn count_series_report_and_csv() {
        let f2 = Arc::new(crate::field::Field::prime(2).unwrap());
        let spec = preset("dp3-fermat", f2).unwrap();
        let series = count_points_bounded_height(
            &spec,
            1,
            1,
            &[],
            "none".into(),
            &EngineConfig::default(),
        )
        .unwrap();
        let mut r = Report::new("count-points");
        push_spec(&mut r, &spec);
        push_count_series(&mut r, &series);
        let text = r.render();
        assert!(text.contains("degree.0.orbits"));
        assert!(text.contains("cumulative.1"));
        let csv = series_to_csv(&series);
        assert_eq!(csv.lines().count(), 3);
    }
}
