//! Training/application instances: capped bags of cases sampled from a
//! generated pool, plus symbol-level corruption simulating grounding noise.

use crate::case::CaseData;
use crate::error::CorpusError;
use crate::registry::TaskSpec;
use crate::seed::stream_rng;
use logic_core::{Atom, Background, GridState, TargetType, Term};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// One bag of positive and negative example atoms for a task.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub task_id: String,
    pub positives: Vec<Atom>,
    pub negatives: Vec<Atom>,
    /// Per-slot corruption probability this instance was produced with.
    pub corruption_rate: f64,
}

/// Draw an instance uniformly without replacement from a generated pool.
/// Clean: `corruption_rate` is 0.
pub fn sample_instance(
    task: &TaskSpec,
    pool_pos: &[Atom],
    pool_neg: &[Atom],
    n_pos: usize,
    n_neg: usize,
    seed: u64,
) -> Result<Instance, CorpusError> {
    let (cap_pos, cap_neg) = task.domain.caps();
    if n_pos > cap_pos {
        return Err(CorpusError::CapExceeded {
            what: "positives",
            requested: n_pos,
            cap: cap_pos,
        });
    }
    if n_neg > cap_neg {
        return Err(CorpusError::CapExceeded {
            what: "negatives",
            requested: n_neg,
            cap: cap_neg,
        });
    }
    let mut rng = stream_rng(seed, 0);
    let positives = sample_without_replacement(task, pool_pos, n_pos, &mut rng)?;
    let negatives = sample_without_replacement(task, pool_neg, n_neg, &mut rng)?;
    Ok(Instance {
        task_id: task.id.to_string(),
        positives,
        negatives,
        corruption_rate: 0.0,
    })
}

fn sample_without_replacement(
    task: &TaskSpec,
    pool: &[Atom],
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Atom>, CorpusError> {
    if n > pool.len() {
        return Err(CorpusError::ExhaustedSpace {
            task: task.id.to_string(),
            needed: n,
            available: pool.len(),
        });
    }
    // Partial Fisher-Yates over an index vector.
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let j = i + rng.gen_range(0..idx.len() - i);
        idx.swap(i, j);
        out.push(pool[idx[i]].clone());
    }
    Ok(out)
}

/// Replace each symbol slot (grid coordinate, target type, background,
/// digit) with a uniform *wrong* value with probability `rate`. The input is
/// untouched; the returned instance records `rate`.
pub fn corrupt_instance(inst: &Instance, rate: f64, seed: u64) -> Instance {
    assert!((0.0..=1.0).contains(&rate), "corruption rate {rate} not in [0,1]");
    let mut rng = stream_rng(seed, 0);
    let corrupt_all = |atoms: &[Atom], rng: &mut ChaCha8Rng| {
        atoms.iter().map(|a| corrupt_atom(a, rate, rng)).collect()
    };
    Instance {
        task_id: inst.task_id.clone(),
        positives: corrupt_all(&inst.positives, &mut rng),
        negatives: corrupt_all(&inst.negatives, &mut rng),
        corruption_rate: rate,
    }
}

fn wrong_in(n: i64, v: i64, rng: &mut ChaCha8Rng) -> i64 {
    (v + 1 + rng.gen_range(0..n - 1)) % n
}

fn corrupt_state(s: &GridState, rate: f64, rng: &mut ChaCha8Rng) -> GridState {
    let mut out = *s;
    if rng.gen_bool(rate) {
        out.m_row = wrong_in(3, out.m_row, rng);
    }
    if rng.gen_bool(rate) {
        out.m_col = wrong_in(3, out.m_col, rng);
    }
    if rng.gen_bool(rate) {
        out.t_row = wrong_in(3, out.t_row, rng);
    }
    if rng.gen_bool(rate) {
        out.t_col = wrong_in(3, out.t_col, rng);
    }
    if rng.gen_bool(rate) {
        out.target = TargetType::ALL[wrong_in(2, out.target.index() as i64, rng) as usize];
    }
    if rng.gen_bool(rate) {
        out.bg = Background::ALL[wrong_in(3, out.bg.index() as i64, rng) as usize];
    }
    out
}

fn corrupt_digit(d: i64, rate: f64, rng: &mut ChaCha8Rng) -> i64 {
    if rng.gen_bool(rate) {
        wrong_in(10, d, rng)
    } else {
        d
    }
}

/// Corrupt one example atom. Grid-walk atoms are corrupted through their
/// state list, with the final-state argument mirroring the corrupted last
/// entry — the atom is re-read off the noisy state sequence.
fn corrupt_atom(atom: &Atom, rate: f64, rng: &mut ChaCha8Rng) -> Atom {
    if let Ok(states) = CaseData::walk_from_atom(atom) {
        let noisy: Vec<GridState> = states
            .iter()
            .map(|s| corrupt_state(s, rate, rng))
            .collect();
        return CaseData::Walk(noisy).atom();
    }
    let args = atom
        .args
        .iter()
        .map(|t| corrupt_term(t, rate, rng))
        .collect();
    Atom {
        pred: atom.pred.clone(),
        args,
    }
}

fn corrupt_term(t: &Term, rate: f64, rng: &mut ChaCha8Rng) -> Term {
    match t {
        Term::Int(d) => Term::Int(corrupt_digit(*d, rate, rng)),
        Term::List(items) => Term::List(
            items
                .iter()
                .map(|x| corrupt_term(x, rate, rng))
                .collect(),
        ),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::{DigitCase, DigitLayout};
    use crate::registry::find_task;

    fn digit_atom(digits: &[i64], tail: i64) -> Atom {
        CaseData::Digits(DigitCase {
            digits: digits.to_vec(),
            tail,
            layout: DigitLayout::ResultLast,
        })
        .atom()
    }

    #[test]
    fn rate_zero_is_identity() {
        let t = find_task("cumulative_sum").unwrap();
        let inst = Instance {
            task_id: t.id.to_string(),
            positives: vec![digit_atom(&[2, 3, 4], 9)],
            negatives: vec![digit_atom(&[2, 3, 4], 8)],
            corruption_rate: 0.0,
        };
        let out = corrupt_instance(&inst, 0.0, 7);
        assert_eq!(out, inst);
    }

    #[test]
    fn rate_one_changes_every_digit() {
        let inst = Instance {
            task_id: "cumulative_sum".into(),
            positives: vec![digit_atom(&[2, 3, 4, 5, 6], 9)],
            negatives: vec![],
            corruption_rate: 0.0,
        };
        for seed in 0..20 {
            let out = corrupt_instance(&inst, 1.0, seed);
            let orig = CaseData::digits_from_atom(&inst.positives[0], DigitLayout::ResultLast)
                .unwrap();
            let got =
                CaseData::digits_from_atom(&out.positives[0], DigitLayout::ResultLast).unwrap();
            for (a, b) in orig.digits.iter().zip(&got.digits) {
                assert_ne!(a, b);
            }
            assert_ne!(orig.tail, got.tail);
            assert_eq!(out.corruption_rate, 1.0);
        }
        // The input itself stays clean.
        assert_eq!(inst.corruption_rate, 0.0);
        assert_eq!(inst.positives[0], digit_atom(&[2, 3, 4, 5, 6], 9));
    }

    #[test]
    fn walk_corruption_mirrors_the_final_state() {
        let t = find_task("right_priority").unwrap();
        let space = crate::gen::positive_space(&t).unwrap();
        let CaseData::Walk(states) = &space[0] else {
            panic!("walk space");
        };
        let inst = Instance {
            task_id: t.id.to_string(),
            positives: vec![CaseData::Walk(states.clone()).atom()],
            negatives: vec![],
            corruption_rate: 0.0,
        };
        for seed in 0..10 {
            let out = corrupt_instance(&inst, 0.5, seed);
            let atom = &out.positives[0];
            let noisy = CaseData::walk_from_atom(atom).unwrap();
            assert_eq!(
                atom.args[1],
                noisy.last().unwrap().to_term(),
                "final-state argument must mirror the corrupted list"
            );
        }
    }

    #[test]
    fn wrong_in_never_returns_the_original() {
        let mut rng = stream_rng(3, 1);
        for v in 0..10 {
            for _ in 0..50 {
                assert_ne!(wrong_in(10, v, &mut rng), v);
            }
        }
    }
}
