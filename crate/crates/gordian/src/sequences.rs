//! Explicit unknotting sequences for the pretzel and twist families, and a
//! machine check that a claimed sequence is a genuine genus non-increasing
//! totally positive unknotting: every change switches a positive crossing,
//! every intermediate diagram stays a genus ≤ 1 knot, and the final step is
//! the unknot. Together with the matching lower bound this certifies the
//! exact unknotting number.

use serde::Serialize;

use crate::error::Error;
use crate::knotio::{to_diagram, Presentation};
use crate::poly::HomflyValue;
use crate::skein::{conway, SkeinEngine};

/// One crossing change: switch crossing `crossing` (0-based, in the PD /
/// construction order of the step's diagram) from positive to negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingChange {
    pub crossing: usize,
}

/// A claimed unknotting sequence: `steps[t]` is the knot before change `t`,
/// `steps` ends at an unknot presentation, and `changes[t]` names the
/// crossing switched to pass from `steps[t]` to `steps[t + 1]`.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceCertificate {
    pub steps: Vec<Presentation>,
    pub changes: Vec<CrossingChange>,
    pub claimed_length: u64,
}

/// Topmost crossing of pretzel band `band` given the current parameters:
/// bands occupy contiguous crossing ranges in order.
fn pretzel_band_top(params: &[i64; 3], band: usize) -> usize {
    params[..band]
        .iter()
        .map(|&a| (2 * a + 1).unsigned_abs() as usize)
        .sum()
}

/// Optimal sequence for the positive pretzel knot P(2p+1, 2q+1, 2r+1):
/// empty the two cheapest bands one crossing change at a time, then one
/// final change turns a single-crossing band negative, which unknots.
/// Length is min{p+q, q+r, r+p} + 1.
pub fn pretzel_sequence(p: u64, q: u64, r: u64) -> SequenceCertificate {
    let start = [p as i64, q as i64, r as i64];
    let (i, j) = [(0usize, 1usize), (0, 2), (1, 2)]
        .into_iter()
        .min_by_key(|&(a, b)| (start[a] + start[b], a, b))
        .unwrap();

    let mut params = start;
    let mut steps = vec![Presentation::Pretzel(params[0], params[1], params[2])];
    let mut changes = Vec::new();
    let change = |params: &mut [i64; 3],
                      steps: &mut Vec<Presentation>,
                      changes: &mut Vec<CrossingChange>,
                      band: usize| {
        changes.push(CrossingChange {
            crossing: pretzel_band_top(params, band),
        });
        params[band] -= 1;
        steps.push(Presentation::Pretzel(params[0], params[1], params[2]));
    };
    for band in [i, j] {
        while params[band] > 0 {
            change(&mut params, &mut steps, &mut changes, band);
        }
    }
    // params[i] = params[j] = 0: switch the lone crossing of band i, giving
    // a (-1, 1, ·) pretzel, which is an unknot
    change(&mut params, &mut steps, &mut changes, i);
    let claimed_length = changes.len() as u64;
    SequenceCertificate { steps, changes, claimed_length }
}

/// Optimal sequence for the 2m-twist knot: each change switches the first
/// crossing of the twist region, shortening it by two. Length is m.
pub fn twist_sequence(m: u64) -> SequenceCertificate {
    let steps = (0..=m).rev().map(Presentation::Twist).collect();
    let changes = vec![CrossingChange { crossing: 0 }; m as usize];
    SequenceCertificate { steps, changes, claimed_length: m }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub claimed_length: u64,
    pub failures: Vec<String>,
}

/// Check every claim the certificate makes, from scratch:
/// shape, all steps are knots of genus-compatible Conway degree, every
/// switched crossing is positive, each switch yields the HOMFLY polynomial
/// of the next step, and the final step has trivial HOMFLY polynomial.
pub fn verify_sequence(
    cert: &SequenceCertificate,
    engine: &SkeinEngine,
) -> Result<VerificationReport, Error> {
    let mut failures = Vec::new();
    if cert.steps.len() != cert.changes.len() + 1 {
        failures.push(format!(
            "{} steps do not frame {} changes",
            cert.steps.len(),
            cert.changes.len()
        ));
    }
    if cert.claimed_length != cert.changes.len() as u64 {
        failures.push(format!(
            "claimed length {} but {} changes listed",
            cert.claimed_length,
            cert.changes.len()
        ));
    }
    if !failures.is_empty() {
        return Ok(VerificationReport { ok: false, claimed_length: cert.claimed_length, failures });
    }

    // structural checks: every step stays in a genus ≤ 1 family form and
    // each transition changes exactly one band count by -2
    for (t, pair) in cert.steps.windows(2).enumerate() {
        match (&pair[0], &pair[1]) {
            (Presentation::Pretzel(a, b, c), Presentation::Pretzel(x, y, z)) => {
                let deltas: Vec<i64> = [x - a, y - b, z - c].into();
                if deltas.iter().filter(|&&d| d != 0).count() != 1
                    || !deltas.contains(&-1)
                {
                    failures.push(format!(
                        "step {t}: transition is not a single band count change of -2"
                    ));
                }
            }
            (Presentation::Twist(m), Presentation::Twist(m2)) => {
                if *m2 + 1 != *m {
                    failures.push(format!(
                        "step {t}: twist parameter does not drop by one"
                    ));
                }
            }
            _ => failures.push(format!("step {t}: steps leave the family forms")),
        }
    }

    let mut homflys: Vec<HomflyValue> = Vec::with_capacity(cert.steps.len());
    for (t, step) in cert.steps.iter().enumerate() {
        let d = to_diagram(step)?;
        if d.component_count() != 1 {
            failures.push(format!("step {t} is not a knot"));
        }
        let h = engine.homfly(&d.to_pd())?;
        let nabla = conway(&h);
        if let Ok((_, hi, _, _)) = nabla.bounds() {
            if hi > 2 {
                failures.push(format!("step {t} has Conway degree {hi} > 2"));
            }
        }
        homflys.push(h);
    }

    for (t, change) in cert.changes.iter().enumerate() {
        let d = to_diagram(&cert.steps[t])?;
        if change.crossing >= d.crossing_count() {
            failures.push(format!("step {t}: no crossing {}", change.crossing));
            continue;
        }
        if d.sign(change.crossing) != 1 {
            failures.push(format!(
                "step {t}: crossing {} is not positive",
                change.crossing
            ));
            continue;
        }
        let switched = engine.homfly(&d.switch(change.crossing).to_pd())?;
        if switched != homflys[t + 1] {
            failures.push(format!(
                "step {t}: switching crossing {} does not give step {}",
                change.crossing,
                t + 1
            ));
        }
    }

    if *homflys.last().unwrap() != HomflyValue::monomial(0, 0, 1) {
        failures.push("final step is not the unknot".into());
    }

    Ok(VerificationReport {
        ok: failures.is_empty(),
        claimed_length: cert.claimed_length,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skein::DEFAULT_CROSSING_LIMIT;

    fn engine() -> SkeinEngine {
        SkeinEngine::new(DEFAULT_CROSSING_LIMIT).with_cache()
    }

    #[test]
    fn pretzel_lengths_match_formula() {
        for (p, q, r) in [(0u64, 0, 0), (1, 1, 1), (2, 1, 3), (0, 2, 1)] {
            let cert = pretzel_sequence(p, q, r);
            let expected = [p + q, q + r, r + p].into_iter().min().unwrap() + 1;
            assert_eq!(cert.claimed_length, expected);
            assert_eq!(cert.steps.len() as u64, expected + 1);
        }
    }

    #[test]
    fn pretzel_small_sequences_verify() {
        let e = engine();
        for (p, q, r) in [(0u64, 0, 0), (1, 0, 0), (1, 1, 1), (0, 2, 1)] {
            let cert = pretzel_sequence(p, q, r);
            let report = verify_sequence(&cert, &e).unwrap();
            assert!(report.ok, "P({p},{q},{r}) failed: {:?}", report.failures);
        }
    }

    #[test]
    fn twist_sequences_verify() {
        let e = engine();
        for m in 0..=3u64 {
            let cert = twist_sequence(m);
            assert_eq!(cert.claimed_length, m);
            let report = verify_sequence(&cert, &e).unwrap();
            assert!(report.ok, "T_{} failed: {:?}", 2 * m, report.failures);
        }
    }

    #[test]
    fn verifier_rejects_tampering() {
        let e = engine();
        // claim the trefoil unknots with zero changes
        let bogus = SequenceCertificate {
            steps: vec![Presentation::Pretzel(0, 0, 0)],
            changes: vec![],
            claimed_length: 0,
        };
        assert!(!verify_sequence(&bogus, &e).unwrap().ok);

        // break a valid certificate's claimed length
        let mut cert = twist_sequence(2);
        cert.claimed_length = 1;
        assert!(!verify_sequence(&cert, &e).unwrap().ok);

        // point a change at a wrong crossing: the clasp is negative
        let mut cert = twist_sequence(1);
        cert.changes[0].crossing = 2;
        assert!(!verify_sequence(&cert, &e).unwrap().ok);

        // band count jumping by -4 in one step
        let mut cert = pretzel_sequence(2, 0, 0);
        cert.steps.remove(1);
        cert.changes.remove(0);
        cert.claimed_length -= 1;
        assert!(!verify_sequence(&cert, &e).unwrap().ok);
    }
}
