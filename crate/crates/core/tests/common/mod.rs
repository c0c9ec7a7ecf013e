//! Test oracles that do not share code with the library's solver.
#![allow(dead_code)]

use linkage_opt::linkage::{FingerPose, LinkageTopology, StateVector};

type V = [f64; 2];

fn add(a: V, b: V) -> V {
    [a[0] + b[0], a[1] + b[1]]
}
fn sub(a: V, b: V) -> V {
    [a[0] - b[0], a[1] - b[1]]
}
fn scale(a: V, s: f64) -> V {
    [a[0] * s, a[1] * s]
}
fn dot(a: V, b: V) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}
fn unit(t: f64) -> V {
    [t.cos(), t.sin()]
}
fn angle(v: V) -> f64 {
    v[1].atan2(v[0])
}

/// Fixed geometry of the bundled linkage, read from the model file.
#[derive(Debug, Clone, Copy)]
pub struct Geometry {
    pub k: V,
    pub o: V,
    pub h1: f64,
    pub h2: f64,
    pub lp: f64,
    pub bh: f64,
    pub ba: f64,
    pub alpha: f64,
}

impl Geometry {
    pub fn of(topo: &LinkageTopology) -> Self {
        let f = topo.model_file();
        let mcp = f.anchors["MCP"];
        Geometry {
            k: sub(f.anchors["K"], mcp),
            o: sub(f.anchors["O"], mcp),
            h1: f.lengths["h1"],
            h2: f.lengths["h2"],
            lp: f.phalanges.proximal,
            bh: f.lengths["BH"],
            ba: f.lengths["BA"],
            alpha: f.angles["alpha"].to_radians(),
        }
    }
}

/// Assembly branch: signs of the three square roots in the construction.
pub const BRANCH: (f64, f64, f64) = (1.0, 1.0, 1.0);

/// Root of |p0 + s·u − c| = r on the chosen branch.
fn line_circle(p0: V, u: V, c: V, r: f64, br: f64) -> Option<f64> {
    let w = sub(p0, c);
    let b = dot(w, u);
    let disc = b * b - dot(w, w) + r * r;
    (disc >= 0.0).then(|| -b + br * disc.sqrt())
}

/// Closed-form assembly of the bundled linkage, solving the loops one at a
/// time in the frame of the MCP joint. `vars` in BC CD DE EF FG GH BK CI EJ
/// order. Returns `None` when a loop cannot close.
pub fn construct(g: &Geometry, vars: &[f64; 9], pose: FingerPose) -> Option<StateVector> {
    let [bc, cd, de, ef, fg, gh, bk, ci, ej] = *vars;
    let (b1, b2, b3) = BRANCH;
    let qm = pose.q_mcp.to_radians();
    let qp = pose.q_pip.to_radians();
    let tp = -qm;
    let tm = -(qm + qp);
    let (up, np) = (unit(tp), unit(tp + std::f64::consts::FRAC_PI_2));
    let (um, nm) = (unit(tm), unit(tm + std::f64::consts::FRAC_PI_2));

    // proximal body about K, pin I on the proximal rail
    let r1 = (bk + bc).hypot(ci);
    let g1 = ci.atan2(bk + bc);
    let c1 = line_circle(scale(np, g.h1), up, g.k, r1, b1)?;
    let i = add(scale(up, c1), scale(np, g.h1));
    let q_b = angle(sub(i, g.k)) + g1;
    let b = add(g.k, scale(unit(q_b), bk));
    let c = add(g.k, scale(unit(q_b), bk + bc));
    let d = add(c, scale(unit(q_b + std::f64::consts::FRAC_PI_2), cd));

    // middle body about D, pin J on the middle rail
    let r2 = de.hypot(ej);
    let g2 = ej.atan2(de);
    let p0 = add(scale(up, g.lp), scale(nm, g.h2));
    let c2 = line_circle(p0, um, d, r2, b2)?;
    let j = add(p0, scale(um, c2));
    let q_d = angle(sub(j, d)) + g2;
    let e = add(d, scale(unit(q_d), de));
    let f = add(e, scale(unit(q_d + std::f64::consts::FRAC_PI_2), ef));

    // rocker about B meets the coupler from F
    let sig = g.bh.hypot(gh);
    let g3 = gh.atan2(g.bh);
    let v = sub(f, b);
    let dist = dot(v, v).sqrt();
    let a = (sig * sig - fg * fg + dist * dist) / (2.0 * dist);
    let h2 = sig * sig - a * a;
    if h2 < 0.0 {
        return None;
    }
    let ev = scale(v, 1.0 / dist);
    let nv = [-ev[1], ev[0]];
    let gpt = add(add(b, scale(ev, a)), scale(nv, b3 * h2.sqrt()));
    let q_a = angle(sub(gpt, b)) + g3;
    let q_g = angle(sub(f, gpt));

    // actuator
    let apt = add(b, scale(unit(q_a + g.alpha), g.ba));
    let oa = sub(apt, g.o);
    Some(StateVector {
        l_oa: dot(oa, oa).sqrt(),
        q_o: angle(oa),
        q_a,
        q_b,
        q_g,
        q_d,
        c1,
        c2,
    })
}

/// Angle difference folded into (−π, π].
pub fn wrap(d: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let r = d.rem_euclid(t);
    if r > std::f64::consts::PI {
        r - t
    } else {
        r
    }
}

/// Largest entrywise difference, comparing angles modulo 2π.
pub fn state_distance(a: &StateVector, b: &StateVector) -> f64 {
    let (x, y) = (a.to_array(), b.to_array());
    (0..8)
        .map(|i| {
            let d = x[i] - y[i];
            if (1..6).contains(&i) {
                wrap(d).abs()
            } else {
                d.abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Actuator length at a pose from the closed-form oracle.
pub fn actuator_length(g: &Geometry, vars: &[f64; 9], pose: FingerPose) -> Option<f64> {
    construct(g, vars, pose).map(|s| s.l_oa)
}

/// Central-difference torques (per radian) from the closed-form oracle.
pub fn fd_torques(g: &Geometry, vars: &[f64; 9], pose: FingerPose, h_rad: f64) -> Option<(f64, f64)> {
    let hd = h_rad.to_degrees();
    let at = |m: f64, p: f64| actuator_length(g, vars, FingerPose { q_mcp: m, q_pip: p });
    let dm = (at(pose.q_mcp + hd, pose.q_pip)? - at(pose.q_mcp - hd, pose.q_pip)?) / (2.0 * h_rad);
    let dp = (at(pose.q_mcp, pose.q_pip + hd)? - at(pose.q_mcp, pose.q_pip - hd)?) / (2.0 * h_rad);
    Some((dm, dp))
}
