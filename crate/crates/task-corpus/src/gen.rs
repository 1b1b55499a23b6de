//! Case generation: positives drawn uniformly from the task's enumerable
//! space (case length first, then within the length bucket, both without
//! replacement), negatives half near-miss / half uniform random, and every
//! emitted label verified against the task's reference rule.

use crate::case::{CaseData, DigitLayout};
use crate::error::CorpusError;
use crate::registry::{priority_secondary, TaskDomain, TaskSpec};
use crate::seed::stream_rng;
use crate::{mario, mnist};
use logic_core::{entails, Atom, Direction, ProveLimits};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Generator shape behind a task id.
#[derive(Clone, Copy, Debug)]
enum Family {
    Priority(Direction),
    Just(Direction),
    OneStep(Direction),
    BombFar,
    Flower,
    ChessJump,
    /// Fold the first op for a sampled prefix, the second for the rest.
    FoldPriority(mnist::FoldOp, mnist::FoldOp),
    Cumulative(mnist::FoldOp, DigitLayout),
    Monotone { increasing: bool },
}

fn family_of(id: &str) -> Result<Family, CorpusError> {
    use mnist::FoldOp::{Add, Multi};
    use Direction::{Down, Left, Right, Up};
    Ok(match id {
        "right_priority" => Family::Priority(Right),
        "up_priority" => Family::Priority(Up),
        "left_priority" => Family::Priority(Left),
        "down_priority" => Family::Priority(Down),
        "just_up" => Family::Just(Up),
        "just_down" => Family::Just(Down),
        "just_left" => Family::Just(Left),
        "just_right" => Family::Just(Right),
        "right_one_step" => Family::OneStep(Right),
        "down_one_step" => Family::OneStep(Down),
        "left_one_step" => Family::OneStep(Left),
        "up_one_step" => Family::OneStep(Up),
        "bomb_far" => Family::BombFar,
        "flower" => Family::Flower,
        "chess_jump" => Family::ChessJump,
        "add_priority" => Family::FoldPriority(Add, Multi),
        "multi_priority" => Family::FoldPriority(Multi, Add),
        "cumulative_sum" => Family::Cumulative(Add, DigitLayout::ResultLast),
        "cumulative_product" => Family::Cumulative(Multi, DigitLayout::ResultLast),
        "reverse_cumulative_sum" => Family::Cumulative(Add, DigitLayout::ResultFirst),
        "reverse_cumulative_product" => Family::Cumulative(Multi, DigitLayout::ResultFirst),
        "increasing" => Family::Monotone { increasing: true },
        "decreasing" => Family::Monotone { increasing: false },
        other => return Err(CorpusError::UnknownTask(other.to_string())),
    })
}

/// Result/tag placement for a digit task, `None` for grid walks.
pub fn digit_layout(task: &TaskSpec) -> Result<Option<DigitLayout>, CorpusError> {
    Ok(match family_of(task.id)? {
        Family::Cumulative(_, layout) => Some(layout),
        Family::FoldPriority(..) => Some(DigitLayout::ResultLast),
        Family::Monotone { increasing: true } => Some(DigitLayout::TagLast),
        Family::Monotone { increasing: false } => Some(DigitLayout::TagFirst),
        _ => None,
    })
}

/// The task's full distinct positive space, in a deterministic order.
pub fn positive_space(task: &TaskSpec) -> Result<Vec<CaseData>, CorpusError> {
    let walks = |v: Vec<Vec<logic_core::GridState>>| v.into_iter().map(CaseData::Walk).collect();
    let digits =
        |v: Vec<crate::case::DigitCase>| v.into_iter().map(CaseData::Digits).collect::<Vec<_>>();
    Ok(match family_of(task.id)? {
        Family::Priority(p) => walks(mario::priority_space(p, priority_secondary(p))),
        Family::Just(d) => walks(mario::just_space(d)),
        Family::OneStep(d) => walks(mario::one_step_space(d)),
        Family::BombFar => walks(mario::bomb_far_space()),
        Family::Flower => walks(mario::flower_space()),
        Family::ChessJump => walks(mario::chess_space()),
        Family::FoldPriority(a, b) => {
            digits(mnist::fold_priority_space(a, b, task.case_lengths))
        }
        Family::Cumulative(op, layout) => {
            digits(mnist::cumulative_space(op, task.case_lengths, layout))
        }
        Family::Monotone { increasing } => {
            let layout = if increasing {
                DigitLayout::TagLast
            } else {
                DigitLayout::TagFirst
            };
            digits(mnist::monotone_space(increasing, task.case_lengths, layout))
        }
    })
}

/// A generated negative with its provenance: mutated positive or uniform
/// random draw.
#[derive(Clone, Debug)]
pub struct NegCase {
    pub atom: Atom,
    pub near_miss: bool,
}

const NEAR_ATTEMPTS_PER_KIND: usize = 60;
const RANDOM_ATTEMPTS: usize = 600;

fn mutate(case: &CaseData, kind: usize, rng: &mut ChaCha8Rng) -> Option<CaseData> {
    match case {
        CaseData::Walk(s) => mario::near_miss(s, kind, rng).map(CaseData::Walk),
        CaseData::Digits(d) => mnist::near_miss(d, kind, rng).map(CaseData::Digits),
    }
}

/// [`gen_cases`] with per-negative provenance tags.
pub fn gen_cases_tagged(
    task: &TaskSpec,
    n_pos: usize,
    n_neg: usize,
    seed: u64,
) -> Result<(Vec<Atom>, Vec<NegCase>), CorpusError> {
    let space = positive_space(task)?;
    gen_cases_in_space(task, &space, n_pos, n_neg, seed)
}

/// Generate `n_pos` distinct positives and `n_neg` distinct negatives.
pub fn gen_cases(
    task: &TaskSpec,
    n_pos: usize,
    n_neg: usize,
    seed: u64,
) -> Result<(Vec<Atom>, Vec<Atom>), CorpusError> {
    let (pos, neg) = gen_cases_tagged(task, n_pos, n_neg, seed)?;
    Ok((pos, neg.into_iter().map(|n| n.atom).collect()))
}

/// Core generator against a pre-enumerated positive space; bulk callers
/// enumerate once and reuse it across many seeds.
pub fn gen_cases_in_space(
    task: &TaskSpec,
    space: &[CaseData],
    n_pos: usize,
    n_neg: usize,
    seed: u64,
) -> Result<(Vec<Atom>, Vec<NegCase>), CorpusError> {
    if n_pos == 0 || n_neg == 0 {
        return Err(CorpusError::InvalidRequest(
            "need at least one positive and one negative".into(),
        ));
    }
    let domain = task.domain.background();
    let rule = &task.ground_truth_rule.clauses;
    let limits = ProveLimits::default();
    let layout = digit_layout(task)?;

    // Positives: pick a case length uniformly among lengths that still have
    // unused cases, then a case uniformly inside that bucket.
    let mut buckets: Vec<(usize, Vec<usize>)> = task
        .case_lengths
        .iter()
        .map(|&l| (l, Vec::new()))
        .collect();
    for (i, c) in space.iter().enumerate() {
        let b = buckets
            .iter_mut()
            .find(|(l, _)| *l == c.length())
            .unwrap_or_else(|| panic!("{}: case length {} not in registry", task.id, c.length()));
        b.1.push(i);
    }
    let mut rng = stream_rng(seed, 0);
    let mut positives: Vec<Atom> = Vec::with_capacity(n_pos);
    for _ in 0..n_pos {
        let nonempty: Vec<usize> = (0..buckets.len())
            .filter(|&i| !buckets[i].1.is_empty())
            .collect();
        if nonempty.is_empty() {
            return Err(CorpusError::ExhaustedSpace {
                task: task.id.to_string(),
                needed: n_pos,
                available: space.len(),
            });
        }
        let bi = nonempty[rng.gen_range(0..nonempty.len())];
        let slot = rng.gen_range(0..buckets[bi].1.len());
        let idx = buckets[bi].1.swap_remove(slot);
        let atom = space[idx].atom();
        assert!(
            entails(rule, &atom, &domain, &limits),
            "{}: generated positive not entailed: {atom}",
            task.id
        );
        positives.push(atom);
    }

    // Negatives: alternate near-miss and random draws, near-miss kinds
    // cycling round-robin; a kind with no valid site falls through to the
    // next, and a fully failed near-miss slot falls back to a random draw.
    let n_kinds = match task.domain {
        TaskDomain::Mario => mario::NEAR_MISS_KINDS,
        TaskDomain::Mnist => mnist::NEAR_MISS_KINDS,
    };
    let mut rng = stream_rng(seed, 1);
    let mut seen: HashSet<String> = HashSet::new();
    let mut negatives: Vec<NegCase> = Vec::with_capacity(n_neg);
    let mut kind_cursor = 0usize;
    for i in 0..n_neg {
        let mut emitted = false;
        if i % 2 == 0 {
            'kinds: for off in 0..n_kinds {
                let kind = (kind_cursor + off) % n_kinds;
                for _ in 0..NEAR_ATTEMPTS_PER_KIND {
                    let src = &space[rng.gen_range(0..space.len())];
                    let Some(cand) = mutate(src, kind, &mut rng) else {
                        continue; // no valid site in this source; try another
                    };
                    let atom = cand.atom();
                    let key = atom.to_string();
                    if seen.contains(&key) || entails(rule, &atom, &domain, &limits) {
                        continue;
                    }
                    seen.insert(key);
                    negatives.push(NegCase {
                        atom,
                        near_miss: true,
                    });
                    kind_cursor = (kind + 1) % n_kinds;
                    emitted = true;
                    break 'kinds;
                }
            }
        }
        if !emitted {
            for _ in 0..RANDOM_ATTEMPTS {
                let len = task.case_lengths[rng.gen_range(0..task.case_lengths.len())];
                let cand = match task.domain {
                    TaskDomain::Mario => CaseData::Walk(mario::random_case(len, &mut rng)),
                    TaskDomain::Mnist => CaseData::Digits(mnist::random_case(
                        len,
                        layout.expect("digit tasks have a layout"),
                        &mut rng,
                    )),
                };
                let atom = cand.atom();
                let key = atom.to_string();
                if seen.contains(&key) || entails(rule, &atom, &domain, &limits) {
                    continue;
                }
                seen.insert(key);
                negatives.push(NegCase {
                    atom,
                    near_miss: false,
                });
                emitted = true;
                break;
            }
        }
        if !emitted {
            return Err(CorpusError::ExhaustedSpace {
                task: task.id.to_string(),
                needed: n_neg,
                available: negatives.len(),
            });
        }
    }
    Ok((positives, negatives))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::find_task;

    #[test]
    fn unknown_ids_are_rejected() {
        assert!(matches!(
            family_of("sideways_priority"),
            Err(CorpusError::UnknownTask(_))
        ));
    }

    #[test]
    fn every_registry_id_has_a_family() {
        for t in crate::registry::registry() {
            assert!(family_of(t.id).is_ok(), "{}", t.id);
        }
    }

    #[test]
    fn layouts_follow_the_task_shape() {
        let layout = |id: &str| digit_layout(&find_task(id).unwrap()).unwrap();
        assert_eq!(layout("cumulative_sum"), Some(DigitLayout::ResultLast));
        assert_eq!(
            layout("reverse_cumulative_product"),
            Some(DigitLayout::ResultFirst)
        );
        assert_eq!(layout("increasing"), Some(DigitLayout::TagLast));
        assert_eq!(layout("decreasing"), Some(DigitLayout::TagFirst));
        assert_eq!(layout("flower"), None);
    }

    #[test]
    fn zero_requests_are_invalid() {
        let t = find_task("just_up").unwrap();
        assert!(matches!(
            gen_cases(&t, 0, 5, 1),
            Err(CorpusError::InvalidRequest(_))
        ));
        assert!(matches!(
            gen_cases(&t, 5, 0, 1),
            Err(CorpusError::InvalidRequest(_))
        ));
    }
}
