//! Sampled mutual refinement of the ball topology of `O_G` and the topology
//! generated by `B_G`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::family::{ZeroNeighborhoods, DEPTHS, MIN_POINTS};
use super::{member, Neighborhood};
use crate::algebra::Gamma;
use crate::error::Result;
use crate::fields::sample::{random_element, random_in_cut, Mode};
use crate::fields::Field;
use crate::lattice::classify::{og_nontrivial, OgNontriviality};
use crate::subgroups::SubgroupDescriptor;

const EXAMPLES: usize = 3;
const BALL_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceStatus {
    Witness,
    NoWitnessFound,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessPair {
    pub outer: String,
    pub inner: String,
}

/// One direction of the refinement: every sampled outer set around a point
/// should contain an inner set around that point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Direction {
    pub trials: usize,
    pub found: usize,
    pub missing: usize,
    pub examples: Vec<WitnessPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub field: String,
    pub subgroup: String,
    pub status: EquivalenceStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub og_ring: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balls_to_basis: Option<Direction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_to_balls: Option<Direction>,
    pub seed: u64,
}

impl Direction {
    fn new(trials: usize) -> Self {
        Self { trials, found: 0, missing: 0, examples: Vec::new() }
    }

    fn record(&mut self, hit: Option<(String, String)>) {
        match hit {
            Some((outer, inner)) => {
                self.found += 1;
                if self.examples.len() < EXAMPLES {
                    self.examples.push(WitnessPair { outer, inner });
                }
            }
            None => self.missing += 1,
        }
    }
}

/// For sampled balls, finds a translate of a `B_G` zero neighborhood inside;
/// for sampled translates, finds a ball inside. Skipped unless `O_G` is
/// nontrivial.
pub fn basis_equivalence_check(field: &Field, g: &SubgroupDescriptor, trials: usize, seed: u64) -> Result<EquivalenceReport> {
    let mut report = EquivalenceReport {
        field: field.to_string(),
        subgroup: g.to_string(),
        status: EquivalenceStatus::Skipped,
        og_ring: None,
        reason: None,
        balls_to_basis: None,
        basis_to_balls: None,
        seed,
    };
    let og = match og_nontrivial(field, g, trials, seed)? {
        OgNontriviality::Nontrivial { report: r } => r.og,
        OgNontriviality::Trivial { reason, .. } => {
            report.reason = Some(format!("precondition fails: {reason}"));
            return Ok(report);
        }
    };
    report.og_ring = Some(og.name());
    let fam = ZeroNeighborhoods::new(field, g)?;
    let stage = og.stage();
    let radius = |rng: &mut ChaCha8Rng| {
        if og.coord_rank() == 2 {
            Gamma::pair(rng.gen_range(-1..=1), rng.gen_range(-2..=4))
        } else {
            Gamma::int(rng.gen_range(-2..=4))
        }
    };

    let mut to_basis = Direction::new(trials);
    let mut to_balls = Direction::new(trials);
    for i in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x2545_F491_4F6C_DD1D));
        let center = random_element(field, &mut rng, -3..=3, Mode::Exact);

        let r = radius(&mut rng);
        let ball = Neighborhood::ball(&og, center.clone(), r, false);
        let mut hit = None;
        for (k, s) in fam.candidates(*DEPTHS.start()) {
            let w = fam.get(k, s)?.translate(&center)?;
            let pts = fam.points(&w, k, &center, &mut rng);
            if pts.len() >= MIN_POINTS && pts.iter().all(|p| matches!(member(&ball, p), Ok(true))) {
                hit = Some((ball.to_string(), w.to_string()));
                break;
            }
        }
        to_basis.record(hit);

        let k = rng.gen_range(-1..=4);
        let s = rng.gen_range(0..fam.shape_count().max(1));
        let mut hit = None;
        if !fam.is_empty() {
            let w = fam.get(k, s)?.translate(&center)?;
            let start = center.val_at(stage).ok().filter(|_| !center.is_zero());
            let base = match (start, og.coord_rank()) {
                (Some(v), _) => v,
                (None, 2) => Gamma::pair(0, 0),
                (None, _) => Gamma::int(0),
            };
            for j in 0..48 {
                let rj = if og.coord_rank() == 2 { base.add(&Gamma::pair(j / 8, j % 8))? } else { base.add(&Gamma::int(j))? };
                let inside = (0..BALL_POINTS).all(|_| {
                    let e = random_in_cut(field, stage, &rj, false, &mut rng, Mode::Exact);
                    center.add(&e).map(|z| matches!(member(&w, &z), Ok(true))).unwrap_or(false)
                });
                if inside {
                    hit = Some((w.to_string(), Neighborhood::ball(&og, center.clone(), rj, false).to_string()));
                    break;
                }
            }
        }
        to_balls.record(hit);
    }
    report.status = if to_basis.missing + to_balls.missing == 0 {
        EquivalenceStatus::Witness
    } else {
        EquivalenceStatus::NoWitnessFound
    };
    report.balls_to_basis = Some(to_basis);
    report.basis_to_balls = Some(to_balls);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDescriptor;
    use crate::subgroups::{Flavor, Oracle};

    #[test]
    fn squares_and_artin_schreier() {
        let q2 = Field::new(FieldDescriptor::qadic(2, 32)).unwrap();
        let r = basis_equivalence_check(&q2, &SubgroupDescriptor::PowerGroup { q: 2 }, 10, 4).unwrap();
        assert_eq!(r.status, EquivalenceStatus::Witness, "{r:#?}");
        let f3 = Field::new(FieldDescriptor::laurent(3, 1, 24)).unwrap();
        let r = basis_equivalence_check(&f3, &SubgroupDescriptor::ArtinSchreier { p: 3 }, 10, 4).unwrap();
        assert_eq!(r.status, EquivalenceStatus::Witness, "{r:#?}");
    }

    #[test]
    fn improper_group_is_skipped() {
        let q2 = Field::new(FieldDescriptor::qadic(2, 16)).unwrap();
        let all = SubgroupDescriptor::Oracle(Oracle::everything(Flavor::Multiplicative));
        let r = basis_equivalence_check(&q2, &all, 5, 0).unwrap();
        assert_eq!(r.status, EquivalenceStatus::Skipped);
    }
}
