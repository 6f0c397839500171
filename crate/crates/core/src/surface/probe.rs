//! Sampling the global body over a grid of classes: homogeneity, Minkowski
//! subadditivity, log-concavity of volumes and the pseudo-effectivity of
//! `D - tC` over the body.

use num_traits::Signed;

use super::body::{okounkov_body_surface, surface_volume, SurfaceBody};
use super::zariski::zariski_decomposition;
use super::{add, axpy, scale, Class, FlagData, SurfaceError, SurfaceModel};
use crate::algebraic::SqrtSum;
use crate::rational::{int, Rational};

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub bodies: Vec<(Class, SurfaceBody)>,
    /// Grid entries that are not big, with the reason.
    pub skipped: Vec<(Class, String)>,
    pub homogeneity: bool,
    pub subadditivity: bool,
    pub log_concavity: bool,
    pub containment: bool,
}

impl ProbeReport {
    pub fn all_passed(&self) -> bool {
        self.homogeneity && self.subadditivity && self.log_concavity && self.containment
    }
}

/// `D - tC` pseudo-effective for every `t` over the body. Checked at the
/// rational breakpoints and at `mu`; an irrational `mu` is decided exactly
/// in the quadric model and skipped otherwise (closedness of the cone makes
/// the breakpoints below it sufficient).
fn psef_over_body(model: &SurfaceModel, d: &[Rational], c: &[Rational], body: &SurfaceBody) -> bool {
    let mut ts: Vec<Rational> = body.alpha.breakpoints().iter().chain(body.beta.breakpoints()).cloned().collect();
    ts.push(body.a.clone());
    if let Some(mu) = body.mu.as_rational() {
        ts.push(mu.clone());
    } else if model.is_quadric() {
        let mu = body.mu.value();
        let (qd, bdc, qc) = (model.square(d), model.form(d, c), model.square(c));
        let q = &(&(&mu * &mu).scale(&qc) - &mu.scale(&(int(2) * bdc))) + &qd;
        let dh = model.form(d, model.reference());
        let ch = model.form(c, model.reference());
        let h = &mu.scale(&-ch) + &dh;
        if q.is_negative() || h.is_negative() {
            return false;
        }
    }
    ts.iter().all(|t| zariski_decomposition(model, &axpy(&-t, c, d)).is_ok())
}

fn minkowski_inside(x: &SurfaceBody, y: &SurfaceBody, sum: &SurfaceBody) -> bool {
    let (vx, vy) = (x.vertices(), y.vertices());
    vx.iter().all(|(t1, y1)| vy.iter().all(|(t2, y2)| sum.contains(&(t1 + t2), &(y1 + y2))))
}

/// `sqrt w >= sqrt u + sqrt v` for rationals `u, v, w >= 0`, squared twice.
fn root_superadditive(u: &Rational, v: &Rational, w: &Rational) -> bool {
    let gap = w - u - v;
    !gap.is_negative() && &gap * &gap >= int(4) * u * v
}

pub fn global_body_probe(model: &SurfaceModel, flag: &FlagData, grid: &[Class]) -> Result<ProbeReport, SurfaceError> {
    let mut bodies: Vec<(Class, SurfaceBody)> = Vec::new();
    let mut skipped = Vec::new();
    for d in grid {
        match okounkov_body_surface(model, d, flag) {
            Ok(b) => bodies.push((d.clone(), b)),
            Err(e @ (SurfaceError::NotBig | SurfaceError::NotPseudoEffective)) => skipped.push((d.clone(), e.to_string())),
            Err(e) => return Err(e),
        }
    }
    let mut homogeneity = true;
    let mut containment = true;
    for (d, b) in &bodies {
        for p in [int(2), int(3)] {
            let bp = okounkov_body_surface(model, &scale(&p, d), flag)?;
            homogeneity &= bp == b.dilate(&p);
        }
        containment &= psef_over_body(model, d, &flag.curve, b);
    }
    let mut subadditivity = true;
    let mut log_concavity = true;
    for i in 0..bodies.len() {
        for j in i + 1..bodies.len() {
            let (d1, b1) = &bodies[i];
            let (d2, b2) = &bodies[j];
            let s = add(d1, d2);
            let bs = okounkov_body_surface(model, &s, flag)?;
            subadditivity &= minkowski_inside(b1, b2, &bs);
            let u = surface_volume(model, d1)?.volume;
            let v = surface_volume(model, d2)?.volume;
            let w = surface_volume(model, &s)?.volume;
            log_concavity &= root_superadditive(&u, &v, &w);
            // the exact areas agree with the volumes
            log_concavity &= bs.area().scale(&int(2)) == SqrtSum::from_rational(w);
        }
    }
    Ok(ProbeReport { bodies, skipped, homogeneity, subadditivity, log_concavity, containment })
}
