//! Sampling checker for the axioms (V1)-(V6).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::family::{ZeroNeighborhoods, MIN_POINTS};
use super::{member, v_axiom_witness, Axiom, AxiomFailure, AxiomReport, FailureKind, Neighborhood};
use crate::algebra::Gamma;
use crate::error::{Error, Result};
use crate::fields::sample::{random_element, random_in_cut, Mode};
use crate::fields::{Element, Field};
use crate::lattice::classify::{og_nontrivial, OgNontriviality};
use crate::lattice::compat::element_with_val;
use crate::lattice::ValuationRingRef;
use crate::subgroups::SubgroupDescriptor;

const MAX_LISTED: usize = 16;
/// Points drawn from a ball witness per trial.
const BALL_POINTS: usize = 4;

/// Which family of zero neighborhoods is checked.
#[derive(Debug, Clone)]
pub enum Basis {
    /// Balls around zero of a nontrivial chain ring.
    Balls(ValuationRingRef),
    /// Zero neighborhoods taken from `B_G`.
    SubgroupImages { field: Field, g: SubgroupDescriptor },
}

struct Recorder {
    report: AxiomReport,
}

impl Recorder {
    fn new(axiom: Axiom, trials: usize, seed: u64, rule: &str) -> Self {
        Self {
            report: AxiomReport {
                axiom,
                trials,
                seed,
                witness_rule: rule.into(),
                failure_count: 0,
                failures: Vec::new(),
            },
        }
    }

    fn fail(&mut self, kind: FailureKind, trial: usize, inputs: &[&dyn std::fmt::Display], detail: impl Into<String>) {
        self.report.failure_count += 1;
        if self.report.failures.len() < MAX_LISTED {
            self.report.failures.push(AxiomFailure {
                kind,
                trial,
                inputs: inputs.iter().map(|x| x.to_string()).collect(),
                detail: detail.into(),
            });
        }
    }

    /// Routes an engine error to an `Undecided` entry.
    fn settle(&mut self, trial: usize, r: Result<()>) -> Result<()> {
        match r {
            Ok(()) => Ok(()),
            Err(e @ (Error::PrecisionExhausted(_) | Error::Undecided(_))) => {
                self.fail(FailureKind::Undecided, trial, &[], e.to_string());
                Ok(())
            }
            Err(e) => Err(e),
        }
    }
}

fn trial_rng(seed: u64, axiom: Axiom, trial: usize) -> ChaCha8Rng {
    let tag = Axiom::ALL.iter().position(|a| *a == axiom).unwrap() as u64 + 1;
    ChaCha8Rng::seed_from_u64(seed ^ (tag << 56) ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Checks all six axioms on `trials` seeded instances each.
pub fn check_v_axioms(basis: &Basis, trials: usize, seed: u64) -> Result<Vec<AxiomReport>> {
    match basis {
        Basis::Balls(ring) => {
            if ring.is_trivial() {
                return Err(Error::UnsupportedBasis);
            }
            per_axiom(|a| check_ball_axiom(ring, a, trials, seed))
        }
        Basis::SubgroupImages { field, g } => {
            let fam = ZeroNeighborhoods::new(field, g)?;
            per_axiom(|a| check_family_axiom(&fam, a, trials, seed))
        }
    }
}

/// Runs the axioms on separate threads; results come back in axiom order.
fn per_axiom(run: impl Fn(Axiom) -> Result<AxiomReport> + Sync) -> Result<Vec<AxiomReport>> {
    let run = &run;
    std::thread::scope(|scope| {
        let handles: Vec<_> = Axiom::ALL.iter().map(|&a| scope.spawn(move || run(a))).collect();
        handles.into_iter().map(|h| h.join().expect("axiom checker panicked")).collect()
    })
}

fn random_radius<R: Rng + ?Sized>(ring: &ValuationRingRef, rng: &mut R) -> Gamma {
    if ring.coord_rank() == 2 {
        Gamma::pair(rng.gen_range(-2..=2), rng.gen_range(-4..=6))
    } else {
        Gamma::int(rng.gen_range(-4..=6))
    }
}

fn nonzero<R: Rng + ?Sized>(field: &Field, rng: &mut R, vals: std::ops::RangeInclusive<i64>) -> Element {
    loop {
        let x = random_element(field, rng, vals.clone(), Mode::Exact);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Replaces each input by the simplest element of the same value while the
/// failure persists.
fn shrink(ring: &ValuationRingRef, inputs: &mut [Element], fails: &dyn Fn(&[Element]) -> Result<bool>) {
    for i in 0..inputs.len() {
        let Ok(v) = inputs[i].val_at(ring.stage()) else { continue };
        let Ok(simple) = element_with_val(ring.field(), ring.stage(), &v) else { continue };
        let saved = std::mem::replace(&mut inputs[i], simple);
        if !matches!(fails(inputs), Ok(true)) {
            inputs[i] = saved;
        }
    }
}

fn check_ball_axiom(ring: &ValuationRingRef, axiom: Axiom, trials: usize, seed: u64) -> Result<AxiomReport> {
    let field = ring.field();
    let stage = ring.stage();
    let zero = Element::zero(field);
    let ball = |r: Gamma, s: bool| Neighborhood::ball(ring, zero.clone(), r, s);
    let rule = match axiom {
        Axiom::V1 => "U = ball of radius v(x) excludes x; the ball of radius g contains an element of value g+1",
        Axiom::V2 => "W = ball of radius max(g1, g2)",
        Axiom::V3 => "V = U",
        Axiom::V4 => "V = ball of radius max(g - v(x), g - v(y), g, 0)",
        Axiom::V5 => "V = ball of radius max(g + 2 v(x), v(x))",
        Axiom::V6 => "V = ball of radius 2 g",
    };
    let mut rec = Recorder::new(axiom, trials, seed, rule);
    let sample = |r: &Gamma, s: bool, rng: &mut ChaCha8Rng| random_in_cut(field, stage, r, s, rng, Mode::Exact);
    for i in 0..trials {
        let mut rng = trial_rng(seed, axiom, i);
        let g = random_radius(ring, &mut rng);
        let u = ball(g, true);
        let outcome: Result<()> = (|| {
            match axiom {
                Axiom::V1 => {
                    let x = nonzero(field, &mut rng, -6..=6);
                    let v = x.val_at(stage)?;
                    if member(&ball(v, true), &x)? {
                        rec.fail(FailureKind::Refuted, i, &[&x], "x lies in the ball of radius v(x)");
                    }
                    let z = element_with_val(field, stage, &g.succ())?;
                    if !member(&u, &z)? {
                        rec.fail(FailureKind::Refuted, i, &[&g], format!("{z} missing from the ball"));
                    }
                }
                Axiom::V2 => {
                    let g2 = random_radius(ring, &mut rng);
                    let u2 = ball(g2, true);
                    let w = ball(g.max(g2)?, true);
                    for _ in 0..BALL_POINTS {
                        let e = sample(&g.max(g2)?, true, &mut rng);
                        if !(member(&u, &e)? && member(&u2, &e)?) {
                            rec.fail(FailureKind::Refuted, i, &[&e], format!("{w} not inside both balls"));
                        }
                    }
                }
                Axiom::V3 => {
                    let v = v_axiom_witness(axiom, &u, None, None)?;
                    let r = v.as_zero_ball().unwrap().1;
                    for _ in 0..BALL_POINTS {
                        let (a, b) = (sample(&r, true, &mut rng), sample(&r, true, &mut rng));
                        if !member(&u, &a.sub(&b)?)? {
                            rec.fail(FailureKind::Refuted, i, &[&a, &b], "a - b escapes U");
                        }
                    }
                }
                Axiom::V4 => {
                    let x = random_element(field, &mut rng, -3..=3, Mode::Exact);
                    let y = random_element(field, &mut rng, -3..=3, Mode::Exact);
                    let v = v_axiom_witness(axiom, &u, Some(&x), Some(&y))?;
                    let r = v.as_zero_ball().unwrap().1;
                    for _ in 0..BALL_POINTS {
                        let (e1, e2) = (sample(&r, true, &mut rng), sample(&r, true, &mut rng));
                        let fails = |xs: &[Element]| -> Result<bool> {
                            let (x, y) = (&xs[0], &xs[1]);
                            let d = x.add(&e1)?.mul(&y.add(&e2)?)?.sub(&x.mul(y)?)?;
                            Ok(!member(&u, &d)?)
                        };
                        if fails(&[x.clone(), y.clone()])? {
                            let mut xs = vec![x.clone(), y.clone()];
                            shrink(ring, &mut xs, &fails);
                            rec.fail(FailureKind::Refuted, i, &[&xs[0], &xs[1], &e1, &e2], "(x+e1)(y+e2) - xy escapes U");
                        }
                    }
                }
                Axiom::V5 => {
                    let x = nonzero(field, &mut rng, -3..=3).approximate();
                    let v = v_axiom_witness(axiom, &u, Some(&x), None)?;
                    let r = v.as_zero_ball().unwrap().1;
                    for _ in 0..BALL_POINTS {
                        let e = sample(&r, true, &mut rng);
                        let fails = |xs: &[Element]| -> Result<bool> {
                            let x = &xs[0];
                            // Same as (x+e)^-1 - x^-1, with one inversion.
                            let d = e.neg().div(&x.mul(&x.add(&e)?)?)?;
                            Ok(!member(&u, &d)?)
                        };
                        if fails(std::slice::from_ref(&x))? {
                            let mut xs = vec![x.clone()];
                            shrink(ring, &mut xs, &fails);
                            rec.fail(FailureKind::Refuted, i, &[&xs[0], &e], "(x+e)^-1 - x^-1 escapes U");
                        }
                    }
                }
                Axiom::V6 => {
                    let v = v_axiom_witness(axiom, &u, None, None)?;
                    let (_, r, s) = v.as_zero_ball().unwrap();
                    for _ in 0..BALL_POINTS {
                        let x = nonzero(field, &mut rng, -6..=6).approximate();
                        let z = sample(&r, s, &mut rng);
                        let y = z.div(&x)?;
                        if !(member(&u, &x)? || member(&u, &y)?) {
                            rec.fail(FailureKind::Refuted, i, &[&x, &y], "xy in V but neither factor in U");
                        }
                    }
                }
            }
            Ok(())
        })();
        rec.settle(i, outcome)?;
    }
    Ok(rec.report)
}

fn all_in(u: &Neighborhood, xs: impl IntoIterator<Item = Result<Element>>) -> bool {
    xs.into_iter().all(|x| x.and_then(|x| member(u, &x)).unwrap_or(false))
}

/// First candidate from depth `from` on with enough sampled members that
/// satisfies `ok` on them.
fn search(
    fam: &ZeroNeighborhoods,
    from: i64,
    rng: &mut ChaCha8Rng,
    ok: &mut dyn FnMut(&Neighborhood, &[Element]) -> bool,
) -> Result<Option<(i64, usize)>> {
    let zero = Element::zero(fam.field());
    for (k, s) in fam.candidates(from) {
        let v = fam.get(k, s)?;
        let pts = fam.points(&v, k, &zero, rng);
        if pts.len() >= MIN_POINTS && ok(&v, &pts) {
            return Ok(Some((k, s)));
        }
    }
    Ok(None)
}

fn check_family_axiom(fam: &ZeroNeighborhoods, axiom: Axiom, trials: usize, seed: u64) -> Result<AxiomReport> {
    let field = fam.field().clone();
    let rule = match axiom {
        Axiom::V1 => "some member excludes x; every member has a nonzero sampled point",
        Axiom::V2 => "bounded search: W with sampled points in U1 and U2",
        Axiom::V3 => "bounded search: V with sampled differences in U",
        Axiom::V4 => "bounded search: V with sampled (x+e1)(y+e2) - xy in U",
        Axiom::V5 => "bounded search: V with sampled (x+e)^-1 - x^-1 in U",
        Axiom::V6 => "bounded search: V whose sampled factorizations have a factor in U",
    };
    let mut rec = Recorder::new(axiom, trials, seed, rule);
    if fam.is_empty() {
        rec.fail(FailureKind::NoWitnessFound, 0, &[], "no admissible shape for zero neighborhoods in the grid");
        rec.report.failure_count = trials.max(1);
        return Ok(rec.report);
    }
    let zero = Element::zero(&field);
    for i in 0..trials {
        let mut rng = trial_rng(seed, axiom, i);
        let k = rng.gen_range(-1..=4);
        let s = rng.gen_range(0..fam.shape_count());
        let u = fam.get(k, s)?;
        let missing = |rec: &mut Recorder, inputs: &[&dyn std::fmt::Display], what: &str| {
            rec.fail(FailureKind::NoWitnessFound, i, inputs, format!("no {what} among the candidates"))
        };
        match axiom {
            Axiom::V1 => {
                let x = nonzero(&field, &mut rng, -3..=3);
                let found = fam.candidates(-2).any(|(k, s)| {
                    fam.get(k, s).and_then(|n| member(&n, &x)).map(|b| !b).unwrap_or(false)
                });
                if !found {
                    missing(&mut rec, &[&x], "member excluding x");
                }
                if fam.points(&u, k, &zero, &mut rng).iter().all(|p| p.is_zero()) {
                    missing(&mut rec, &[&u], "nonzero point of U");
                }
            }
            Axiom::V2 => {
                let k2 = rng.gen_range(-1..=4);
                let u2 = fam.get(k2, rng.gen_range(0..fam.shape_count()))?;
                let w = search(fam, k.max(k2), &mut rng, &mut |_, pts| {
                    all_in(&u, pts.iter().cloned().map(Ok)) && all_in(&u2, pts.iter().cloned().map(Ok))
                })?;
                if w.is_none() {
                    missing(&mut rec, &[&u, &u2], "W inside both");
                }
            }
            Axiom::V3 => {
                let w = search(fam, k, &mut rng, &mut |_, pts| {
                    all_in(&u, pts.iter().flat_map(|a| pts.iter().map(move |b| a.sub(b))))
                })?;
                if w.is_none() {
                    missing(&mut rec, &[&u], "V with V - V inside U");
                }
            }
            Axiom::V4 => {
                let x = random_element(&field, &mut rng, -3..=3, Mode::Exact);
                let y = random_element(&field, &mut rng, -3..=3, Mode::Exact);
                let xy = x.mul(&y)?;
                let w = search(fam, k, &mut rng, &mut |_, pts| {
                    all_in(
                        &u,
                        pts.iter().zip(pts.iter().rev()).map(|(e1, e2)| x.add(e1)?.mul(&y.add(e2)?)?.sub(&xy)),
                    )
                })?;
                if w.is_none() {
                    missing(&mut rec, &[&u, &x, &y], "V with (x+V)(y+V) inside xy + U");
                }
            }
            Axiom::V5 => {
                let x = nonzero(&field, &mut rng, -3..=3);
                let xi = x.inv()?;
                let w = search(fam, k, &mut rng, &mut |_, pts| {
                    all_in(&u, pts.iter().map(|e| x.add(e)?.inv()?.sub(&xi)))
                })?;
                if w.is_none() {
                    missing(&mut rec, &[&u, &x], "V with (x+V)^-1 inside x^-1 + U");
                }
            }
            Axiom::V6 => {
                let factors: Vec<Element> = (0..3).map(|_| nonzero(&field, &mut rng, -6..=6)).collect();
                let w = search(fam, k, &mut rng, &mut |_, pts| {
                    pts.iter().all(|z| {
                        factors.iter().all(|f| {
                            let y = match z.div(f) {
                                Ok(y) => y,
                                Err(_) => return false,
                            };
                            matches!(member(&u, f), Ok(true)) || matches!(member(&u, &y), Ok(true))
                        })
                    })
                })?;
                if w.is_none() {
                    missing(&mut rec, &[&u], "V whose products split with a factor in U");
                }
            }
        }
    }
    Ok(rec.report)
}

/// The outcome of `vtop`: the axioms on a basis, plus whether they are
/// expected to hold.
#[derive(Debug, Clone, Serialize)]
pub struct VtopReport {
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<String>,
    pub basis: String,
    /// For `B_G`: whether `O_G` is nontrivial, which is when the axioms hold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub og_nontrivial: Option<bool>,
    pub expected_to_pass: bool,
    pub axioms: Vec<AxiomReport>,
    pub seed: u64,
    pub trials: usize,
}

impl VtopReport {
    pub fn count(&self, kind: FailureKind) -> usize {
        self.axioms.iter().map(|a| a.count(kind)).sum()
    }

    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed())
    }
}

/// Balls of the finest chain ring when `g` is absent, `B_G` otherwise.
pub fn vtop_report(field: &Field, g: Option<&SubgroupDescriptor>, trials: usize, seed: u64) -> Result<VtopReport> {
    let (basis, subgroup, og) = match g {
        None => {
            let ring = ValuationRingRef::chain(field).pop().ok_or(Error::UnsupportedBasis)?;
            (Basis::Balls(ring), None, None)
        }
        Some(g) => {
            let nontrivial = matches!(og_nontrivial(field, g, trials, seed)?, OgNontriviality::Nontrivial { .. });
            (Basis::SubgroupImages { field: field.clone(), g: g.clone() }, Some(g.to_string()), Some(nontrivial))
        }
    };
    let name = match &basis {
        Basis::Balls(r) => format!("balls of {}", r.name()),
        Basis::SubgroupImages { .. } => "B_G".into(),
    };
    let axioms = check_v_axioms(&basis, trials, seed)?;
    Ok(VtopReport {
        field: field.to_string(),
        subgroup,
        basis: name,
        og_nontrivial: og,
        expected_to_pass: og.unwrap_or(true),
        axioms,
        seed,
        trials,
    })
}
