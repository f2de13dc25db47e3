use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::dispersion::{angle_distance_to_zero, omega_squared, wrap_angle, PlaneWave};
use super::potential::{ChainKind, PotentialSpec};
use crate::error::{Error, Result};

/// Three plane waves with p₁ + p₂ + p₃ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triad {
    pub p: [PlaneWave; 3],
    pub residual: f64,
}

impl Triad {
    pub fn thetas(&self) -> [f64; 3] {
        [self.p[0].theta, self.p[1].theta, self.p[2].theta]
    }

    pub fn omegas(&self) -> [f64; 3] {
        [self.p[0].omega, self.p[1].omega, self.p[2].omega]
    }

    /// Euclidean norm of (θ₁+θ₂+θ₃ mod 2π, ω₁+ω₂+ω₃).
    pub fn compute_residual(p: &[PlaneWave; 3]) -> f64 {
        let dt = angle_distance_to_zero(p[0].theta + p[1].theta + p[2].theta);
        let dw = p[0].omega + p[1].omega + p[2].omega;
        dt.hypot(dw)
    }

    /// Smallest angular distance between two of the carriers ±θₙ.
    pub fn carrier_separation(&self) -> f64 {
        let mut angles = Vec::with_capacity(6);
        for pw in &self.p {
            angles.push(wrap_angle(pw.theta));
            angles.push(wrap_angle(-pw.theta));
        }
        let mut best = f64::INFINITY;
        for i in 0..angles.len() {
            for j in (i + 1)..angles.len() {
                best = best.min(angle_distance_to_zero(angles[i] - angles[j]));
            }
        }
        best
    }

    /// Smallest angular distance between a carrier ±θₙ and any quadratic
    /// harmonic ±θₐ ± θ_b other than the resonant sums themselves.
    pub fn harmonic_separation(&self) -> f64 {
        let th = self.thetas();
        let mut best = f64::INFINITY;
        for n in 0..3 {
            for sn in [1.0, -1.0] {
                for a in 0..3 {
                    for b in a..3 {
                        for sa in [1.0, -1.0] {
                            for sb in [1.0, -1.0] {
                                let resonant = a != b && a != n && b != n && sa == sb && sa == -sn;
                                if resonant {
                                    continue;
                                }
                                let d = angle_distance_to_zero(sa * th[a] + sb * th[b] - sn * th[n]);
                                best = best.min(d);
                            }
                        }
                    }
                }
            }
        }
        best
    }
}

/// Outcome label of a triad search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriadStatus {
    Found,
    /// α > 0: the resonance equation has strictly positive left-hand side.
    AttractiveRegime,
    NoRoots,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriadSearch {
    pub triads: Vec<Triad>,
    pub status: TriadStatus,
    pub message: String,
}

/// Left-hand side of the resonance equation in μᵢ = (1 − cos θᵢ)/2, δ = v₂/4.
pub fn resonance_function(mu1: f64, mu2: f64, alpha: f64, v2: f64) -> f64 {
    let d = v2 / 4.0;
    let a = alpha;
    let root = ((a * mu1 + d) * (a * mu2 + d)).max(0.0).sqrt();
    a * a * mu1 * mu2 * (mu1 + mu2)
        + (2.0 * a * mu1 * mu2 + d) * root
        + d * a * (mu1 * mu2 + mu1 + mu2)
        + 1.25 * d * d
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Builds the triad for a root (μ₁, μ₂), choosing the sign of θ₂ and the
/// frequency branches that minimise |ω₁ + ω₂ + ω₃| with ω₁ > 0.
fn reconstruct(mu1: f64, mu2: f64, spec: &PotentialSpec) -> Result<Triad> {
    let t1 = (1.0 - 2.0 * mu1).clamp(-1.0, 1.0).acos();
    let t2abs = (1.0 - 2.0 * mu2).clamp(-1.0, 1.0).acos();
    let mut best: Option<Triad> = None;
    for s2 in [1.0, -1.0] {
        let t2 = s2 * t2abs;
        let t3 = -t1 - t2;
        for sg2 in [1i8, -1] {
            for sg3 in [1i8, -1] {
                let p = [
                    PlaneWave::new(t1, 1, spec)?,
                    PlaneWave::new(t2, sg2, spec)?,
                    PlaneWave::new(t3, sg3, spec)?,
                ];
                let residual = Triad::compute_residual(&p);
                if best.as_ref().is_none_or(|b| residual < b.residual) {
                    best = Some(Triad { p, residual });
                }
            }
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// Samples the one-parameter family of resonant triads.
///
/// μ₁ runs over a uniform interior grid of (0, 1); for each μ₁ every sign
/// change of the resonance function in μ₂ is bisected to machine precision.
pub fn find_resonant_triads(spec: &PotentialSpec, n_samples: usize, tol: f64) -> Result<TriadSearch> {
    spec.validate()?;
    if spec.kind != ChainKind::Kg {
        return Err(Error::Instability("triad search needs an on-site potential: v2 = 0 for FPU".into()));
    }
    spec.check_stability()?;
    let (alpha, v2) = (spec.alpha, spec.v2());
    const SCAN: usize = 400;
    let mut triads = Vec::new();
    for i in 0..n_samples {
        let mu1 = (i as f64 + 1.0) / (n_samples as f64 + 1.0);
        let f = |mu2: f64| resonance_function(mu1, mu2, alpha, v2);
        let mut prev_x = 1e-12;
        let mut prev_f = f(prev_x);
        for k in 1..=SCAN {
            let x = if k == SCAN { 1.0 - 1e-12 } else { k as f64 / SCAN as f64 };
            let fx = f(x);
            if (fx > 0.0) != (prev_f > 0.0) {
                let mu2 = bisect(f, prev_x, x);
                let triad = reconstruct(mu1, mu2, spec)?;
                if triad.residual <= tol {
                    triads.push(triad);
                }
            }
            prev_x = x;
            prev_f = fx;
        }
    }
    let (status, message) = if !triads.is_empty() {
        (TriadStatus::Found, format!("{} resonant triads", triads.len()))
    } else if alpha > 0.0 {
        (
            TriadStatus::AttractiveRegime,
            "alpha > 0: every term of the resonance equation is positive, no triad exists".to_string(),
        )
    } else {
        (TriadStatus::NoRoots, "no root of the resonance equation within tolerance".to_string())
    };
    Ok(TriadSearch { triads, status, message })
}

/// Integer pairs excluded by the weak non-resonance variant (together with
/// their negatives).
pub const WEAK_EXCLUDED: [(i32, i32); 6] = [(0, 2), (2, 0), (1, -1), (2, 1), (1, 2), (2, 2)];

/// The six pairs of the standing assumption on 𝒵.
pub const ASSUMED_PAIRS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)];

/// Finite-radius enumeration of 𝒵.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZSet {
    pub members: BTreeSet<(i32, i32)>,
    pub radius: i32,
    /// 𝒵 equals the six assumed pairs within the radius.
    pub assumption_holds: bool,
    /// Members outside the six assumed pairs.
    pub extra: Vec<(i32, i32)>,
    /// Members among ±WEAK_EXCLUDED (degenerate three-pulse resonances).
    pub weak_violations: Vec<(i32, i32)>,
    /// (1,0), (0,1), (1,1) ∈ 𝒵 and no weak violation.
    pub weak_variant_holds: bool,
    /// Smallest |(ω·k)² − Ω²(θ·k)| over non-members.
    pub min_nonmember_gap: f64,
}

impl ZSet {
    pub fn contains(&self, k: (i32, i32)) -> bool {
        self.members.contains(&k)
    }
}

/// Enumerates 𝒵 over |k₁|, |k₂| ≤ K.
pub fn build_zset(p1: &PlaneWave, p2: &PlaneWave, spec: &PotentialSpec, k: i32, tol: f64) -> Result<ZSet> {
    for (name, p) in [("p1", p1), ("p2", p2)] {
        if !p.is_on_dispersion_set(spec) {
            return Err(Error::Precondition(format!(
                "{name} is off the dispersion set (defect {:.3e})",
                p.dispersion_defect(spec)
            )));
        }
    }
    let mut members = BTreeSet::new();
    let mut min_nonmember_gap = f64::INFINITY;
    for k1 in -k..=k {
        for k2 in -k..=k {
            let w = p1.omega * f64::from(k1) + p2.omega * f64::from(k2);
            let th = p1.theta * f64::from(k1) + p2.theta * f64::from(k2);
            let gap = (w * w - omega_squared(th, spec)).abs();
            if gap <= tol {
                members.insert((k1, k2));
            } else {
                min_nonmember_gap = min_nonmember_gap.min(gap);
            }
        }
    }
    let assumed: BTreeSet<(i32, i32)> = ASSUMED_PAIRS.iter().copied().filter(|&(a, b)| a.abs() <= k && b.abs() <= k).collect();
    let extra: Vec<(i32, i32)> = members.difference(&assumed).copied().collect();
    let assumption_holds = members == assumed;
    let weak_violations: Vec<(i32, i32)> = WEAK_EXCLUDED
        .iter()
        .flat_map(|&(a, b)| [(a, b), (-a, -b)])
        .filter(|kk| members.contains(kk))
        .collect();
    let weak_variant_holds =
        [(1, 0), (0, 1), (1, 1)].iter().all(|kk| members.contains(kk)) && weak_violations.is_empty();
    Ok(ZSet { members, radius: k, assumption_holds, extra, weak_violations, weak_variant_holds, min_nonmember_gap })
}

/// Picks the triad of a family whose 𝒵 set satisfies the standing
/// assumption and whose carriers ±θₙ are furthest apart.
pub fn select_triad(search: &TriadSearch, spec: &PotentialSpec, k: i32, tol: f64) -> Option<(Triad, ZSet)> {
    let mut best: Option<(Triad, ZSet)> = None;
    for t in &search.triads {
        let Ok(z) = build_zset(&t.p[0], &t.p[1], spec, k, tol) else { continue };
        if !z.assumption_holds {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _)| t.carrier_separation() > b.carrier_separation()) {
            best = Some((*t, z));
        }
    }
    best
}

/// Like [`select_triad`], but ranks members by the smaller of the carrier
/// and quadratic-harmonic separations, so that no second harmonic lands
/// next to a carrier.
pub fn select_triad_separated(search: &TriadSearch, spec: &PotentialSpec, k: i32, tol: f64) -> Option<(Triad, ZSet)> {
    let score = |t: &Triad| t.carrier_separation().min(t.harmonic_separation());
    let mut best: Option<(Triad, ZSet)> = None;
    for t in &search.triads {
        let Ok(z) = build_zset(&t.p[0], &t.p[1], spec, k, tol) else { continue };
        if !z.assumption_holds {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _)| score(t) > score(b)) {
            best = Some((*t, z));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attractive_regime_is_empty() {
        let spec = PotentialSpec::kg(0.5, 1.0, 0.0, 0.0);
        let s = find_resonant_triads(&spec, 50, 1e-10).unwrap();
        assert!(s.triads.is_empty());
        assert_eq!(s.status, TriadStatus::AttractiveRegime);
    }

    #[test]
    fn unstable_regime_errors() {
        let spec = PotentialSpec::kg(-0.3, 1.0, 0.0, 0.0);
        assert!(matches!(find_resonant_triads(&spec, 10, 1e-10), Err(Error::Instability(_))));
    }

    #[test]
    fn repulsive_family_is_resonant() {
        let spec = PotentialSpec::kg(-0.22, 1.0, 0.0, 0.0);
        let s = find_resonant_triads(&spec, 40, 1e-10).unwrap();
        assert!(!s.triads.is_empty());
        for t in &s.triads {
            assert!(t.residual < 1e-10);
            for p in &t.p {
                assert!(p.is_on_dispersion_set(&spec));
            }
        }
    }

    #[test]
    fn zset_of_triad() {
        let spec = PotentialSpec::kg(-0.22, 1.0, 0.0, 0.0);
        let s = find_resonant_triads(&spec, 40, 1e-10).unwrap();
        let (t, z) = select_triad(&s, &spec, 5, 1e-8).unwrap();
        assert!(z.assumption_holds);
        assert!(z.contains((1, 1)) && z.contains((-1, -1)));
        assert!(t.carrier_separation() > 0.5);
    }

    #[test]
    fn identical_waves_break_assumption() {
        let spec = PotentialSpec::kg(-0.22, 1.0, 0.0, 0.0);
        let p = PlaneWave::new(1.0, 1, &spec).unwrap();
        let z = build_zset(&p, &p, &spec, 5, 1e-8).unwrap();
        assert!(!z.assumption_holds);
        assert!(z.contains((2, -1)) && z.contains((-1, 2)));
        assert!(!z.contains((1, -1)));
    }
}
