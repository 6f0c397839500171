//! One function per subcommand: parse the input document, run the
//! computation, and package JSON plus optional CSV/SVG renderings.

use std::path::Path;

use serde_json::{json, Value};

use okounkov::algebraic::SqrtSum;
use okounkov::monomial::{
    family_multiplicity_check, series_from_body, series_okounkov_body, MonomialIdeal, MonomialIdealFamily,
    MonomialSeries,
};
use okounkov::rational::{int, rational_to_f64, rational_to_json, Rational, RationalVector};
use okounkov::semigroup::{
    curve_semigroup_up_to, khovanskii_translate, verify_translate, GradedSemigroup, DEFAULT_CURVE_MAX_DEGREE,
};
use okounkov::surface::{
    class_from_json, class_to_json, cutkosky_mu, okounkov_body_surface, slice_check, surface_volume,
    volume_derivative, zariski_decomposition, Class, FlagData, SurfaceBody, SurfaceModel,
};
use okounkov::toric::{
    divisor_polytope, ehrhart_count, ehrhart_polynomial, toric_okounkov_body, FlagChart, InvariantDivisor, ToricModel,
};
use okounkov::Polytope;

use crate::error::CliError;
use crate::render::{Polygon, Table};

/// Everything a command produces; the caller picks one rendering.
#[derive(Debug, Default)]
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    pub polygon: Option<Polygon>,
}

impl Report {
    pub fn json(json: Value) -> Self {
        Report { json, table: None, polygon: None }
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, CliError> {
    v.get(name).ok_or_else(|| CliError::validation(format!("missing field `{name}`")))
}

fn class_field(v: &Value, name: &str) -> Result<Class, CliError> {
    class_from_json(field(v, name)?).ok_or_else(|| CliError::validation(format!("field `{name}` is not a class")))
}

fn u64_field(v: &Value, name: &str) -> Result<u64, CliError> {
    field(v, name)?.as_u64().ok_or_else(|| CliError::validation(format!("field `{name}` is not a nonnegative integer")))
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::validation(format!("{what}: {e}")))
}

fn points_field(v: &Value, name: &str) -> Result<Vec<RationalVector>, CliError> {
    let arr = field(v, name)?.as_array().ok_or_else(|| CliError::validation(format!("`{name}` must be a list")))?;
    arr.iter()
        .map(|p| {
            class_from_json(p)
                .map(RationalVector::new)
                .ok_or_else(|| CliError::validation(format!("bad point in `{name}`")))
        })
        .collect()
}

fn positive(name: &str, x: u64) -> Result<u64, CliError> {
    if x == 0 {
        return Err(CliError::validation(format!("--{name} must be positive")));
    }
    Ok(x)
}

pub fn decimal(x: f64) -> String {
    // + 0.0 turns -0.0 into 0.0
    format!("{:.12}", x + 0.0)
}

fn approx(r: &Rational) -> String {
    decimal(rational_to_f64(r))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn vertex_table(p: &Polytope) -> Table {
    let mut header: Vec<String> = (1..=p.dim()).map(|i| format!("x{i}")).collect();
    header.extend((1..=p.dim()).map(|i| format!("x{i}_approx")));
    let mut t = Table { header, rows: Vec::new() };
    for v in p.vertices() {
        let mut row: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        row.extend(v.iter().map(approx));
        t.push(row);
    }
    t
}

fn polytope_polygon(p: &Polytope, title: &str) -> Option<Polygon> {
    (p.dim() == 2).then(|| {
        Polygon::convex(title, p.vertices().iter().map(|v| (rational_to_f64(&v[0]), rational_to_f64(&v[1]))).collect())
    })
}

fn polytope_report(p: &Polytope, mut json: Value, title: &str) -> Report {
    json["volume"] = rational_to_json(&p.volume());
    json["body"] = to_value(p);
    Report { json, table: Some(vertex_table(p)), polygon: polytope_polygon(p, title) }
}

pub fn hull(input: &Value) -> Result<Report, CliError> {
    let dim = u64_field(input, "dim")? as usize;
    let points = points_field(input, "points")?;
    let p = Polytope::from_points(&points, dim)?;
    let json = json!({ "affine_dim": p.affine_dim() });
    Ok(polytope_report(&p, json, "convex hull"))
}

// ---- semigroups ----

fn semigroup(input: &Value, degree_needed: u64) -> Result<GradedSemigroup, CliError> {
    if let Some(c) = input.get("curve") {
        let (deg, genus) = (field(c, "c")?.as_i64(), field(c, "g")?.as_i64());
        let (Some(deg), Some(genus)) = (deg, genus) else {
            return Err(CliError::validation("curve needs integer `c` and `g`"));
        };
        return Ok(curve_semigroup_up_to(deg, genus, degree_needed.max(DEFAULT_CURVE_MAX_DEGREE))?);
    }
    Ok(GradedSemigroup::from_json(input)?)
}

pub fn semigroup_body(input: &Value, m_max: u64) -> Result<Report, CliError> {
    let m_max = positive("m-max", m_max)?;
    let s = semigroup(input, m_max)?;
    let adm = s.check_admissibility();
    let b = s.okounkov_body(m_max)?;
    let json = json!({ "exact": b.exact, "m_max": m_max, "admissibility": to_value(&adm) });
    Ok(polytope_report(&b.body, json, "semigroup body"))
}

pub fn semigroup_density(input: &Value, m_max: u64) -> Result<Report, CliError> {
    let m_max = positive("m-max", m_max)?;
    let s = semigroup(input, m_max)?;
    let r = s.density_sequence(m_max)?;
    let mut table = Table::new(&["m", "count", "ratio", "ratio_approx"]);
    let mut rows = Vec::new();
    for ((m, q), c) in r.ratios.iter().zip(&r.counts) {
        table.push(vec![m.to_string(), c.to_string(), q.to_string(), approx(q)]);
        rows.push(json!({ "m": m, "count": c, "ratio": rational_to_json(q) }));
    }
    let json = json!({
        "sequence": rows,
        "target": rational_to_json(&r.target),
        "exact_target": r.exact_target,
    });
    Ok(Report { json, table: Some(table), polygon: None })
}

pub fn semigroup_fujita(input: &Value, p: u64, k: u64) -> Result<Report, CliError> {
    let (p, k) = (positive("p", p)?, positive("k", k)?);
    let s = semigroup(input, p)?;
    let r = s.fujita_gap(p, k)?;
    Ok(Report::json(json!({
        "p": r.p,
        "k": r.k,
        "sumset_size": r.sumset_size,
        "ratio": rational_to_json(&r.ratio),
        "limit": rational_to_json(&r.limit),
        "target": rational_to_json(&r.target),
        "gap": rational_to_json(&r.gap),
        "gap_approx": rational_to_f64(&r.gap),
    })))
}

pub fn semigroup_translate(input: &Value) -> Result<Report, CliError> {
    let gens: Vec<Vec<i64>> = from_value(field(input, "generators")?, "generators")?;
    let bound = input.get("box").and_then(Value::as_i64).unwrap_or(50);
    if bound <= 0 {
        return Err(CliError::validation("`box` must be positive"));
    }
    let r = khovanskii_translate(&gens, bound)?;
    let verified = verify_translate(&gens, &r.z, bound)?;
    Ok(Report::json(json!({
        "z": r.z,
        "box": r.box_bound,
        "checked_points": r.checked_points,
        "box_limited": r.box_limited,
        "verified": verified,
    })))
}

// ---- monomial series and ideals ----

pub fn monomial_body(input: &Value, m_max: u64) -> Result<Report, CliError> {
    let m_max = positive("m-max", m_max)?;
    let series = if let Some(b) = input.get("body") {
        let dim = u64_field(b, "dim")? as usize;
        let k = Polytope::from_points(&points_field(b, "points")?, dim)?;
        series_from_body(&k, m_max)?
    } else {
        MonomialSeries::from_json(input.get("series").unwrap_or(input))?
    };
    let r = series_okounkov_body(&series, m_max, None)?;
    let json = json!({
        "m_max": m_max,
        "certificate": r.certificate,
        "hausdorff_squared": r.hausdorff_squared.as_ref().map(rational_to_json),
        "hausdorff_approx": r.hausdorff,
        "surrogate_b_degree": series.surrogate_b_degree(),
    });
    Ok(polytope_report(&r.body, json, "series body"))
}

fn family(input: &Value, m_max: u64) -> Result<MonomialIdealFamily, CliError> {
    let max_index = input.get("max_index").and_then(Value::as_u64).unwrap_or(m_max);
    if let Some(w) = input.get("valuation") {
        let w: Vec<i64> = from_value(w, "valuation")?;
        return Ok(MonomialIdealFamily::valuation_family(&w, max_index)?);
    }
    if let Some(g) = input.get("power") {
        let gens: Vec<Vec<i64>> = from_value(g, "power")?;
        let vars = gens.first().map_or(0, Vec::len);
        return Ok(MonomialIdealFamily::power_family(&MonomialIdeal::new(vars, gens)?, max_index)?);
    }
    if let Some(n) = input.get("maximal_power") {
        let n = n.as_i64().ok_or_else(|| CliError::validation("`maximal_power` must be an integer"))?;
        let vars = u64_field(input, "vars")? as usize;
        return Ok(MonomialIdealFamily::maximal_power_family(vars, n, max_index)?);
    }
    Ok(MonomialIdealFamily::from_json(input)?)
}

pub fn monomial_mult(input: &Value, m_max: u64) -> Result<Report, CliError> {
    let m_max = positive("m-max", m_max)?;
    let f = family(input, m_max)?;
    let r = family_multiplicity_check(&f, m_max)?;
    let mut table = Table::new(&["m", "colength_ratio", "multiplicity_ratio", "colength_approx", "multiplicity_approx"]);
    let mut rows = Vec::new();
    for ((m, c), (_, e)) in r.colength_ratios.iter().zip(&r.multiplicity_ratios) {
        table.push(vec![m.to_string(), c.to_string(), e.to_string(), approx(c), approx(e)]);
        rows.push(json!({ "m": m, "colength_ratio": rational_to_json(c), "multiplicity_ratio": rational_to_json(e) }));
    }
    let json = json!({
        "sequence": rows,
        "limit": r.limit.as_ref().map(rational_to_json),
        "one_sided_bound_holds": r.one_sided_bound_holds,
    });
    Ok(Report { json, table: Some(table), polygon: None })
}

// ---- toric ----

fn fan(v: &Value) -> Result<ToricModel, CliError> {
    let Some(name) = v.as_str() else {
        return Ok(ToricModel::from_json(v)?);
    };
    let bad = || CliError::validation(format!("unknown fan `{name}`: use Pd, P1xP1, Fa or a fan object"));
    if name == "P1xP1" {
        return Ok(ToricModel::p1_times_p1());
    }
    if let Some(d) = name.strip_prefix('P') {
        let d: usize = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(ToricModel::projective_space(d));
    }
    if let Some(a) = name.strip_prefix('F') {
        return Ok(ToricModel::hirzebruch(a.parse().map_err(|_| bad())?));
    }
    Err(bad())
}

fn toric_input(input: &Value) -> Result<(ToricModel, InvariantDivisor), CliError> {
    let t = fan(field(input, "fan")?)?;
    let d = InvariantDivisor::new(class_field(input, "divisor")?);
    if d.coeffs().len() != t.num_rays() {
        return Err(CliError::validation(format!("divisor needs {} coefficients", t.num_rays())));
    }
    Ok((t, d))
}

pub fn toric_body(input: &Value) -> Result<Report, CliError> {
    let (t, d) = toric_input(input)?;
    let chart = match input.get("flag") {
        Some(o) => FlagChart::new(&t, from_value(o, "flag")?)?,
        None => FlagChart::first(&t),
    };
    let b = toric_okounkov_body(&t, &d, &chart)?;
    let json = json!({ "big": b.big, "flag": chart.order() });
    Ok(polytope_report(&b.body, json, "toric body"))
}

pub fn toric_count(input: &Value, m_max: u64) -> Result<Report, CliError> {
    let m_max = positive("m-max", m_max)?;
    let (t, d) = toric_input(input)?;
    let poly = ehrhart_polynomial(&t, &d)?;
    let mut table = Table::new(&["m", "count", "polynomial"]);
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let c = ehrhart_count(&t, &d, m)?;
        let mut value = Rational::from_integer(0.into());
        for c in poly.iter().rev() {
            value = value * int(m as i64) + c;
        }
        table.push(vec![m.to_string(), c.to_string(), value.to_string()]);
        rows.push(json!({ "m": m, "count": c, "polynomial": rational_to_json(&value) }));
    }
    Ok(Report {
        json: json!({
            "counts": rows,
            "ehrhart_coefficients": poly.iter().map(rational_to_json).collect::<Vec<_>>(),
            "volume": rational_to_json(&divisor_polytope(&t, &d)?.volume()),
        }),
        table: Some(table),
        polygon: None,
    })
}

// ---- surfaces ----

pub fn surface_model(v: &Value) -> Result<SurfaceModel, CliError> {
    match v.as_str() {
        Some("abelian") => Ok(SurfaceModel::abelian()),
        Some("blow-up") => Ok(SurfaceModel::blow_up_plane()),
        Some("three-point") => Ok(SurfaceModel::three_point_blow_up()),
        Some(other) => {
            Err(CliError::validation(format!("unknown model `{other}`: use abelian, blow-up, three-point or an object")))
        }
        None => Ok(SurfaceModel::from_json(v)?),
    }
}

fn surface_input(input: &Value) -> Result<(SurfaceModel, Class), CliError> {
    let m = surface_model(field(input, "model")?)?;
    let d = class_field(input, "divisor")?;
    Ok((m, d))
}

fn flag(input: &Value) -> Result<FlagData, CliError> {
    Ok(FlagData::from_json(field(input, "flag")?)?)
}

pub fn surface_zariski(input: &Value) -> Result<Report, CliError> {
    let (m, d) = surface_input(input)?;
    let z = zariski_decomposition(&m, &d)?;
    let negative: Vec<Value> =
        z.negative.iter().map(|(j, c)| json!({ "curve": j, "coefficient": rational_to_json(c) })).collect();
    let vol = surface_volume(&m, &d)?;
    Ok(Report::json(json!({
        "positive": class_to_json(&z.positive),
        "negative": negative,
        "big": z.big,
        "volume": rational_to_json(&vol.volume),
    })))
}

fn sqrt_json(x: &SqrtSum) -> Value {
    match x.as_rational() {
        Some(r) => json!({ "kind": "rational", "value": rational_to_json(&r), "approx": x.to_f64() }),
        None => {
            let terms: Vec<Value> =
                x.terms().map(|(r, c)| json!({ "radicand": r.to_string(), "coefficient": rational_to_json(c) })).collect();
            json!({ "kind": "sqrt_sum", "terms": terms, "display": x.to_string(), "approx": x.to_f64() })
        }
    }
}

pub fn surface_body_report(body: &SurfaceBody, volume: &Rational, title: &str) -> Report {
    let vertices = body.vertices();
    let mut table = Table::new(&["t", "y", "t_approx", "y_approx"]);
    for (t, y) in &vertices {
        table.push(vec![t.to_string(), y.to_string(), decimal(t.to_f64()), decimal(y.to_f64())]);
    }
    let mut json = body.to_json();
    json["area"] = sqrt_json(&body.area());
    json["volume"] = rational_to_json(volume);
    json["vertices"] = vertices.iter().map(|(t, y)| json!([sqrt_json(t), sqrt_json(y)])).collect();
    let polygon = Polygon { title: title.into(), points: vertices.iter().map(|(t, y)| (t.to_f64(), y.to_f64())).collect() };
    Report { json, table: Some(table), polygon: Some(polygon) }
}

pub fn surface_body(input: &Value) -> Result<Report, CliError> {
    let (m, d) = surface_input(input)?;
    let f = flag(input)?;
    let body = okounkov_body_surface(&m, &d, &f)?;
    let vol = surface_volume(&m, &d)?.volume;
    Ok(surface_body_report(&body, &vol, "surface body"))
}

fn parameters(t: Option<Rational>, grid: Option<Vec<Rational>>) -> Result<Vec<Rational>, CliError> {
    let mut out: Vec<Rational> = t.into_iter().collect();
    out.extend(grid.unwrap_or_default());
    if out.is_empty() {
        return Err(CliError::validation("give --t or --grid"));
    }
    Ok(out)
}

fn pair_json(p: &Option<(Rational, Rational)>) -> Value {
    match p {
        Some((a, b)) => json!([rational_to_json(a), rational_to_json(b)]),
        None => Value::Null,
    }
}

pub fn surface_slice(input: &Value, t: Option<Rational>, grid: Option<Vec<Rational>>) -> Result<Report, CliError> {
    let (m, d) = surface_input(input)?;
    let f = flag(input)?;
    let mut table = Table::new(&["t", "upper_part_matches", "fiber_matches", "passed"]);
    let mut rows = Vec::new();
    for t in parameters(t, grid)? {
        let r = slice_check(&m, &d, &f, &t)?;
        table.push(vec![
            t.to_string(),
            r.upper_part_matches.to_string(),
            r.fiber_matches.to_string(),
            r.passed().to_string(),
        ]);
        rows.push(json!({
            "t": rational_to_json(&t),
            "upper_part_matches": r.upper_part_matches,
            "fiber": pair_json(&r.fiber),
            "restricted": pair_json(&r.restricted),
            "fiber_matches": r.fiber_matches,
            "passed": r.passed(),
        }));
    }
    Ok(Report { json: json!({ "slices": rows }), table: Some(table), polygon: None })
}

pub fn surface_derivative(input: &Value) -> Result<Report, CliError> {
    let (m, d) = surface_input(input)?;
    let f = flag(input)?;
    let r = volume_derivative(&m, &d, &f)?;
    Ok(Report::json(json!({
        "left": rational_to_json(&r.left),
        "right": rational_to_json(&r.right),
        "derivative": r.derivative().map(rational_to_json),
        "alpha": rational_to_json(&r.interval.alpha),
        "beta": rational_to_json(&r.interval.beta),
        "matches": r.matches,
    })))
}

pub fn cutkosky(input: &Value, t: Option<Rational>, grid: Option<Vec<Rational>>) -> Result<Report, CliError> {
    let m = surface_model(field(input, "model")?)?;
    let (a, b1, b2) = (class_field(input, "A")?, class_field(input, "B1")?, class_field(input, "B2")?);
    let ts = parameters(t, grid)?;
    let mut table = Table::new(&["t", "mu", "mu_approx", "well_posed"]);
    let mut rows = Vec::new();
    for t in &ts {
        let r = cutkosky_mu(&m, &a, &b1, &b2, t)?;
        table.push(vec![t.to_string(), r.mu.to_string(), decimal(r.mu.to_f64()), r.well_posed.to_string()]);
        rows.push(json!({ "t": rational_to_json(t), "mu": to_value(&r.mu), "well_posed": r.well_posed }));
    }
    Ok(Report { json: json!({ "samples": rows }), table: Some(table), polygon: None })
}

pub fn rational_arg(s: &str) -> Result<Rational, String> {
    okounkov::rational::parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}
