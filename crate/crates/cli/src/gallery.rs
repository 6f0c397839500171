//! Regenerates the standard pictures from bundled models: the abelian
//! trapezoid, a body with a nonzero lower boundary, and the slope curve.

use std::path::Path;

use serde_json::{json, Value};

use okounkov::algebraic::SqrtSum;
use okounkov::rational::{int, rat, rational_to_json, Rational};
use okounkov::surface::{
    class_from_ints as class, cutkosky_mu, okounkov_body_surface, surface_volume, FlagData, SurfaceModel,
};

use crate::commands::{decimal, surface_body_report, Report};
use crate::error::CliError;
use crate::render::Table;

pub const MU_SAMPLES: i64 = 50;

fn write(dir: &Path, name: &str, contents: &str) -> Result<String, CliError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(name.to_string())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit_body(dir: &Path, stem: &str, r: &Report) -> Result<Vec<String>, CliError> {
    let mut files = vec![write(dir, &format!("{stem}.json"), &pretty(&r.json))?];
    if let Some(t) = &r.table {
        files.push(write(dir, &format!("{stem}.csv"), &t.to_csv()?)?);
    }
    if let Some(p) = &r.polygon {
        files.push(write(dir, &format!("{stem}.svg"), &p.to_svg())?);
    }
    Ok(files)
}

fn body(model: &SurfaceModel, d: &[i64], flag: &FlagData, title: &str) -> Result<(Report, Value), CliError> {
    let d = class(d);
    let b = okounkov_body_surface(model, &d, flag)?;
    let vol = surface_volume(model, &d)?.volume;
    let summary = json!({
        "vertex_count": b.vertices().len(),
        "alpha_identically_zero": b.alpha.pieces().iter().all(|p| p.slope == int(0) && p.intercept == int(0)),
        "beta_breakpoints": b.beta.breakpoints().len().saturating_sub(1),
        "alpha_breakpoints": b.alpha.breakpoints().len().saturating_sub(1),
        "well_formed": b.is_well_formed(),
    });
    Ok((surface_body_report(&b, &vol, title), summary))
}

pub fn gallery(dir: &Path) -> Result<Value, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    let mut index = serde_json::Map::new();

    let abelian = SurfaceModel::abelian();
    let (r, mut s) = body(&abelian, &[3, 1, 0], &FlagData::generic(class(&[2, 1, 1])), "abelian surface")?;
    s["files"] = emit_body(dir, "trapezoid", &r)?.into();
    index.insert("trapezoid".into(), s);

    let three = SurfaceModel::three_point_blow_up();
    let flag = FlagData::with_table(class(&[1, -1, 0, 0]), [(0usize, int(1))].into_iter().collect());
    let (r, mut s) = body(&three, &[4, -1, -1, -1], &flag, "three-point blow-up")?;
    s["files"] = emit_body(dir, "chambers", &r)?.into();
    index.insert("chambers".into(), s);

    // the start class leaves the big cone at t = 1/2, so sample [0, 1/2)
    let (a, b1, b2) = (class(&[3, 1, 1]), class(&[2, 1, 0]), class(&[2, 0, 1]));
    let mut table = Table::new(&["t", "mu", "mu_approx"]);
    let mut samples = Vec::new();
    let mut values: Vec<SqrtSum> = Vec::new();
    for k in 0..MU_SAMPLES {
        let t: Rational = rat(k, 2 * MU_SAMPLES);
        let m = cutkosky_mu(&abelian, &a, &b1, &b2, &t)?;
        table.push(vec![t.to_string(), m.mu.to_string(), decimal(m.mu.to_f64())]);
        samples.push(json!({ "t": rational_to_json(&t), "mu": serde_json::to_value(&m.mu).expect("serializable") }));
        values.push(m.mu.value());
    }
    let nonzero_second_differences = values
        .windows(3)
        .filter(|w| !(&(&w[0] + &w[2]) - &w[1].scale(&int(2))).is_zero())
        .count();
    let files = vec![
        write(dir, "mu_curve.csv", &table.to_csv()?)?,
        write(dir, "mu_curve.json", &pretty(&json!({ "samples": samples })))?,
    ];
    index.insert(
        "mu_curve".into(),
        json!({
            "samples": values.len(),
            "nonzero_second_differences": nonzero_second_differences,
            "affine": nonzero_second_differences == 0,
            "files": files,
        }),
    );

    let index = Value::Object(index);
    write(dir, "index.json", &pretty(&index))?;
    Ok(index)
}
