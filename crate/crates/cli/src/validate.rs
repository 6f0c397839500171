//! Schema and invariant checks that report every failure instead of
//! stopping at the first one.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use okounkov::linalg::det;
use okounkov::rational::{int, Rational};
use okounkov::semigroup::{GradedSemigroup, Point};
use okounkov::surface::{class_from_json, inertia, SurfaceModel};
use okounkov::toric::ToricModel;

use crate::commands::surface_model;
use crate::error::CliError;

pub const SCHEMAS: &[&str] = &["surface-model", "fan", "semigroup"];

#[derive(Debug, Default)]
pub struct Checks(Vec<(String, bool, String)>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push((name.into(), passed, detail.into()));
    }

    pub fn all_passed(&self) -> bool {
        self.0.iter().all(|c| c.1)
    }

    pub fn to_json(&self, schema: &str) -> Value {
        let checks: Vec<Value> =
            self.0.iter().map(|(n, p, d)| json!({ "check": n, "passed": p, "detail": d })).collect();
        let failures: Vec<&str> = self.0.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
        json!({ "schema": schema, "valid": self.all_passed(), "checks": checks, "failures": failures })
    }
}

pub fn validate(input: &Value, schema: &str) -> Result<Checks, CliError> {
    match schema {
        "surface-model" => Ok(surface(input)),
        "fan" => Ok(fan(input)),
        "semigroup" => Ok(semigroup(input)),
        other => Err(CliError::validation(format!("unknown schema `{other}`: use one of {}", SCHEMAS.join(", ")))),
    }
}

fn surface(input: &Value) -> Checks {
    let mut c = Checks::default();
    let model = input.get("model").unwrap_or(input);
    let named = model.as_str().map(|_| surface_model(model));
    let q: Option<Vec<Vec<Rational>>> = match &named {
        Some(Ok(m)) => Some(m.form_matrix().clone()),
        Some(Err(_)) => None,
        None => model.get("Q").and_then(Value::as_array).and_then(|rows| rows.iter().map(class_from_json).collect()),
    };
    let Some(q) = q else {
        c.push("schema", false, "`Q` must be a square matrix of rationals, or a known model name");
        return c;
    };
    let rho = q.len();
    let square = q.iter().all(|r| r.len() == rho);
    c.push("square", square, format!("{rho} rows"));
    if !square {
        return c;
    }
    let symmetric = (0..rho).all(|i| (0..i).all(|j| q[i][j] == q[j][i]));
    c.push("symmetric", symmetric, "");
    let (pos, neg, zero) = inertia(&q);
    c.push(
        "signature",
        pos == 1 && zero == 0,
        format!("({pos}, {neg}) with {zero} null directions; expected (1, {})", rho.saturating_sub(1)),
    );
    let full = match named {
        Some(r) => r.map(|_| ()).map_err(|e| e.to_string()),
        None => SurfaceModel::from_json(model).map(|_| ()).map_err(|e| e.to_string()),
    };
    c.push("model", full.is_ok(), full.err().unwrap_or_default());
    c
}

fn fan(input: &Value) -> Checks {
    let mut c = Checks::default();
    let fan = input.get("fan").unwrap_or(input);
    let rank = fan.get("rank").and_then(Value::as_u64).map(|r| r as usize);
    let rays: Option<Vec<Vec<i64>>> = fan.get("rays").and_then(|r| serde_json::from_value(r.clone()).ok());
    let cones: Option<Vec<Vec<usize>>> = fan.get("max_cones").and_then(|r| serde_json::from_value(r.clone()).ok());
    let (Some(rank), Some(rays), Some(cones)) = (rank, rays, cones) else {
        c.push("schema", false, "need `rank`, integer `rays` and index lists `max_cones`");
        return c;
    };
    for (i, r) in rays.iter().enumerate() {
        let primitive = r.len() == rank && r.iter().fold(0i64, |g, &x| gcd(g, x)) == 1;
        c.push(format!("ray {i} primitive"), primitive, format!("{r:?}"));
    }
    for cone in &cones {
        let name = format!("cone {cone:?} unimodular");
        if cone.len() != rank || cone.iter().any(|&i| i >= rays.len() || rays[i].len() != rank) {
            c.push(name, false, "not simplicial of full dimension");
            continue;
        }
        let m: Vec<Vec<Rational>> = cone.iter().map(|&i| rays[i].iter().map(|&x| int(x)).collect()).collect();
        let d = det(&m);
        c.push(name, d == int(1) || d == int(-1), format!("det = {d}"));
    }
    let full = ToricModel::new(rank, rays, cones);
    c.push("fan", full.is_ok(), full.err().map(|e| e.to_string()).unwrap_or_default());
    c
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn semigroup(input: &Value) -> Checks {
    let mut c = Checks::default();
    if let Some(raw) = input.get("slices").and_then(Value::as_object) {
        let mut slices: BTreeMap<u64, Vec<Point>> = BTreeMap::new();
        for (k, pts) in raw {
            match (k.parse::<u64>(), serde_json::from_value::<Vec<Point>>(pts.clone())) {
                (Ok(m), Ok(p)) => {
                    slices.insert(m, p);
                }
                _ => c.push("schema", false, format!("slice `{k}` is malformed")),
            }
        }
        let max = input.get("max_degree").and_then(Value::as_u64).or_else(|| slices.keys().max().copied()).unwrap_or(0);
        for (&k, a) in &slices {
            for (&l, b) in slices.range(k..) {
                if k + l > max {
                    continue;
                }
                let target = slices.get(&(k + l)).map(Vec::as_slice).unwrap_or(&[]);
                let missing = a.iter().flat_map(|x| b.iter().map(move |y| add(x, y))).find(|s| !target.contains(s));
                c.push(
                    format!("additive {k}+{l}"),
                    missing.is_none(),
                    missing.map(|s| format!("{s:?} missing from slice {}", k + l)).unwrap_or_default(),
                );
            }
        }
    }
    match GradedSemigroup::from_json(input) {
        Ok(s) => {
            let r = s.check_admissibility();
            c.push("contains zero", r.has_zero, "");
            c.push("bounded", r.is_bounded, format!("bound {:?}", r.bound));
            c.push("generates full group", r.generates_full_group, "");
        }
        Err(e) => c.push("semigroup", false, e.to_string()),
    }
    c
}

fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}
