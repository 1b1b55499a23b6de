//! Fixed-shape token encoding for the selection policy: every case becomes
//! `max_case_len` rows of categorical token ids, padded instances become
//! `cap × max_case_len × fields` arrays with row-level validity masks.
//!
//! Grid-walk rows carry the six state fields in disjoint id ranges. Digit
//! rows carry a (position, digit) pair; the result/tag row keeps its place
//! in the sequence but swaps its position token for the reserved RESULT
//! marker, so mean-pooled row multisets still distinguish result-first from
//! result-last tasks.

use crate::case::CaseData;
use crate::error::CorpusError;
use crate::gen::digit_layout;
use crate::instance::Instance;
use crate::registry::{TaskDomain, TaskSpec};
use logic_core::{Atom, Background, GridState, TargetType};

/// The reserved padding token, id 0 in both vocabularies.
pub const PAD: u32 = 0;

/// Shape of one domain's encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodeConfig {
    pub domain: TaskDomain,
    pub cap_pos: usize,
    pub cap_neg: usize,
    /// Token rows per case (states for walks, digits plus the result row).
    pub max_case_len: usize,
    /// Tokens per row.
    pub fields: usize,
    pub vocab: usize,
}

impl EncodeConfig {
    pub fn mario() -> Self {
        EncodeConfig {
            domain: TaskDomain::Mario,
            cap_pos: 20,
            cap_neg: 50,
            max_case_len: 5,
            fields: 6,
            // PAD + 3 rows + 3 cols + 3 rows + 3 cols + 2 types + 3 backgrounds
            vocab: 18,
        }
    }

    pub fn mnist() -> Self {
        EncodeConfig {
            domain: TaskDomain::Mnist,
            cap_pos: 10,
            cap_neg: 20,
            max_case_len: 6,
            fields: 2,
            // PAD + 6 position markers + RESULT + 10 digits
            vocab: 18,
        }
    }

    pub fn for_domain(domain: TaskDomain) -> Self {
        match domain {
            TaskDomain::Mario => Self::mario(),
            TaskDomain::Mnist => Self::mnist(),
        }
    }

    pub fn case_tokens(&self) -> usize {
        self.max_case_len * self.fields
    }
}

/// Padded token arrays for one instance. Token layout is row-major:
/// `tokens[case][row][field]` flattened; masks hold one flag per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceEncoding {
    pub cfg: EncodeConfig,
    pub pos_tokens: Vec<u32>,
    pub neg_tokens: Vec<u32>,
    pub pos_mask: Vec<bool>,
    pub neg_mask: Vec<bool>,
}

const MARIO_ROWS: u32 = 1; // 3 ids
const MARIO_COLS: u32 = 4; // 3 ids
const TARGET_ROWS: u32 = 7; // 3 ids
const TARGET_COLS: u32 = 10; // 3 ids
const TARGET_TYPE: u32 = 13; // 2 ids
const BACKGROUND: u32 = 15; // 3 ids
const DIGIT_POS: u32 = 1; // 6 ids
const RESULT_MARK: u32 = 7; // 1 id
const DIGIT_BASE: u32 = 8; // 10 ids

fn coord_token(base: u32, v: i64, what: &'static str) -> Result<u32, CorpusError> {
    if (0..3).contains(&v) {
        Ok(base + v as u32)
    } else {
        Err(CorpusError::VocabularyOverflow { what, value: v })
    }
}

fn digit_token(d: i64) -> Result<u32, CorpusError> {
    if (0..10).contains(&d) {
        Ok(DIGIT_BASE + d as u32)
    } else {
        Err(CorpusError::VocabularyOverflow {
            what: "digit",
            value: d,
        })
    }
}

fn state_row(s: &GridState) -> Result<[u32; 6], CorpusError> {
    Ok([
        coord_token(MARIO_ROWS, s.m_row, "mario row")?,
        coord_token(MARIO_COLS, s.m_col, "mario column")?,
        coord_token(TARGET_ROWS, s.t_row, "target row")?,
        coord_token(TARGET_COLS, s.t_col, "target column")?,
        TARGET_TYPE + s.target.index() as u32,
        BACKGROUND + s.bg.index() as u32,
    ])
}

/// Token rows for one case atom in this config's domain.
fn case_rows(atom: &Atom, cfg: &EncodeConfig) -> Result<Vec<Vec<u32>>, CorpusError> {
    let rows: Vec<Vec<u32>> = match cfg.domain {
        TaskDomain::Mario => {
            let states = CaseData::walk_from_atom(atom)?;
            states
                .iter()
                .map(|s| state_row(s).map(|r| r.to_vec()))
                .collect::<Result<_, _>>()?
        }
        TaskDomain::Mnist => {
            let malformed = || CorpusError::MalformedCase(atom.to_string());
            let [a, b] = atom.args.as_slice() else {
                return Err(malformed());
            };
            // The result/tag argument is whichever side is not the longer
            // digit list; tags are singleton lists, results bare integers.
            let (digits_term, tail_term, tail_first) = match (a, b) {
                (logic_core::Term::Int(_), _) => (b, a, true),
                (_, logic_core::Term::Int(_)) => (a, b, false),
                (logic_core::Term::List(x), logic_core::Term::List(y)) => {
                    if x.len() == 1 && y.len() > 1 {
                        (b, a, true)
                    } else if y.len() == 1 && x.len() > 1 {
                        (a, b, false)
                    } else {
                        return Err(malformed());
                    }
                }
                _ => return Err(malformed()),
            };
            let digits = logic_core::as_int_list(digits_term).ok_or_else(malformed)?;
            let tail = match tail_term {
                logic_core::Term::Int(x) => *x,
                t => match logic_core::as_int_list(t).as_deref() {
                    Some([x]) => *x,
                    _ => return Err(malformed()),
                },
            };
            let mut rows = Vec::with_capacity(digits.len() + 1);
            let mut seq_pos = 0u32;
            if tail_first {
                rows.push(vec![RESULT_MARK, digit_token(tail)?]);
                seq_pos += 1;
            }
            for d in &digits {
                if seq_pos >= 6 {
                    return Err(CorpusError::CaseTooLong {
                        len: digits.len() + 1,
                        max: cfg.max_case_len,
                    });
                }
                rows.push(vec![DIGIT_POS + seq_pos, digit_token(*d)?]);
                seq_pos += 1;
            }
            if !tail_first {
                rows.push(vec![RESULT_MARK, digit_token(tail)?]);
            }
            rows
        }
    };
    if rows.len() > cfg.max_case_len {
        return Err(CorpusError::CaseTooLong {
            len: rows.len(),
            max: cfg.max_case_len,
        });
    }
    Ok(rows)
}

fn encode_side(
    atoms: &[Atom],
    cap: usize,
    what: &'static str,
    cfg: &EncodeConfig,
) -> Result<(Vec<u32>, Vec<bool>), CorpusError> {
    if atoms.len() > cap {
        return Err(CorpusError::CapExceeded {
            what,
            requested: atoms.len(),
            cap,
        });
    }
    let mut tokens = vec![PAD; cap * cfg.case_tokens()];
    let mut mask = vec![false; cap * cfg.max_case_len];
    for (ci, atom) in atoms.iter().enumerate() {
        for (ri, row) in case_rows(atom, cfg)?.iter().enumerate() {
            let at = (ci * cfg.max_case_len + ri) * cfg.fields;
            tokens[at..at + cfg.fields].copy_from_slice(row);
            mask[ci * cfg.max_case_len + ri] = true;
        }
    }
    Ok((tokens, mask))
}

/// Encode an instance into the fixed-shape padded token arrays.
pub fn encode_instance(
    inst: &Instance,
    cfg: &EncodeConfig,
) -> Result<InstanceEncoding, CorpusError> {
    let (pos_tokens, pos_mask) = encode_side(&inst.positives, cfg.cap_pos, "positives", cfg)?;
    let (neg_tokens, neg_mask) = encode_side(&inst.negatives, cfg.cap_neg, "negatives", cfg)?;
    Ok(InstanceEncoding {
        cfg: *cfg,
        pos_tokens,
        neg_tokens,
        pos_mask,
        neg_mask,
    })
}

fn coord_back(tok: u32, base: u32, what: &'static str) -> Result<i64, CorpusError> {
    let v = tok as i64 - base as i64;
    if (0..3).contains(&v) {
        Ok(v)
    } else {
        Err(CorpusError::VocabularyOverflow {
            what,
            value: tok as i64,
        })
    }
}

fn decode_side(
    tokens: &[u32],
    mask: &[bool],
    cap: usize,
    task: &TaskSpec,
    cfg: &EncodeConfig,
) -> Result<Vec<Atom>, CorpusError> {
    let layout = digit_layout(task)?;
    let mut out = Vec::new();
    for ci in 0..cap {
        let rows: Vec<&[u32]> = (0..cfg.max_case_len)
            .filter(|ri| mask[ci * cfg.max_case_len + ri])
            .map(|ri| {
                let at = (ci * cfg.max_case_len + ri) * cfg.fields;
                &tokens[at..at + cfg.fields]
            })
            .collect();
        if rows.is_empty() {
            continue;
        }
        let case = match cfg.domain {
            TaskDomain::Mario => {
                let states: Vec<GridState> = rows
                    .iter()
                    .map(|r| {
                        Ok(GridState {
                            m_row: coord_back(r[0], MARIO_ROWS, "mario row")?,
                            m_col: coord_back(r[1], MARIO_COLS, "mario column")?,
                            t_row: coord_back(r[2], TARGET_ROWS, "target row")?,
                            t_col: coord_back(r[3], TARGET_COLS, "target column")?,
                            target: TargetType::ALL[(r[4] - TARGET_TYPE) as usize],
                            bg: Background::ALL[(r[5] - BACKGROUND) as usize],
                        })
                    })
                    .collect::<Result<_, CorpusError>>()?;
                CaseData::Walk(states)
            }
            TaskDomain::Mnist => {
                let layout = layout.ok_or_else(|| {
                    CorpusError::MalformedCase(format!("{} is not a digit task", task.id))
                })?;
                let mut digits = Vec::new();
                let mut tail = None;
                for r in rows {
                    let d = r[1] as i64 - DIGIT_BASE as i64;
                    if !(0..10).contains(&d) {
                        return Err(CorpusError::VocabularyOverflow {
                            what: "digit",
                            value: r[1] as i64,
                        });
                    }
                    if r[0] == RESULT_MARK {
                        tail = Some(d);
                    } else {
                        digits.push(d);
                    }
                }
                let tail = tail.ok_or_else(|| {
                    CorpusError::MalformedCase("digit case without a result row".into())
                })?;
                CaseData::Digits(crate::case::DigitCase {
                    digits,
                    tail,
                    layout,
                })
            }
        };
        out.push(case.atom());
    }
    Ok(out)
}

/// Rebuild the instance from its encoding; exact on unpadded slots.
pub fn decode_instance(
    enc: &InstanceEncoding,
    task: &TaskSpec,
) -> Result<Instance, CorpusError> {
    let cfg = &enc.cfg;
    Ok(Instance {
        task_id: task.id.to_string(),
        positives: decode_side(&enc.pos_tokens, &enc.pos_mask, cfg.cap_pos, task, cfg)?,
        negatives: decode_side(&enc.neg_tokens, &enc.neg_mask, cfg.cap_neg, task, cfg)?,
        corruption_rate: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::{DigitCase, DigitLayout};

    #[test]
    fn vocab_ranges_tile_without_overlap() {
        let m = EncodeConfig::mario();
        assert_eq!(BACKGROUND + 3, m.vocab as u32);
        let n = EncodeConfig::mnist();
        assert_eq!(DIGIT_BASE + 10, n.vocab as u32);
        assert_eq!(RESULT_MARK, DIGIT_POS + 6);
    }

    #[test]
    fn digit_rows_keep_sequence_positions() {
        let cfg = EncodeConfig::mnist();
        let last = CaseData::Digits(DigitCase {
            digits: vec![1, 2, 3],
            tail: 6,
            layout: DigitLayout::ResultLast,
        });
        let rows = case_rows(&last.atom(), &cfg).unwrap();
        assert_eq!(
            rows,
            vec![
                vec![DIGIT_POS, DIGIT_BASE + 1],
                vec![DIGIT_POS + 1, DIGIT_BASE + 2],
                vec![DIGIT_POS + 2, DIGIT_BASE + 3],
                vec![RESULT_MARK, DIGIT_BASE + 6],
            ]
        );
        let first = CaseData::Digits(DigitCase {
            digits: vec![1, 2, 3],
            tail: 6,
            layout: DigitLayout::ResultFirst,
        });
        let rows = case_rows(&first.atom(), &cfg).unwrap();
        assert_eq!(
            rows,
            vec![
                vec![RESULT_MARK, DIGIT_BASE + 6],
                vec![DIGIT_POS + 1, DIGIT_BASE + 1],
                vec![DIGIT_POS + 2, DIGIT_BASE + 2],
                vec![DIGIT_POS + 3, DIGIT_BASE + 3],
            ]
        );
        // Same digits, different layout ⇒ different row multisets even
        // after pooling over rows.
        let mut a: Vec<Vec<u32>> = case_rows(&last.atom(), &cfg).unwrap();
        let mut b: Vec<Vec<u32>> = case_rows(&first.atom(), &cfg).unwrap();
        a.sort();
        b.sort();
        assert_ne!(a, b);
    }

    #[test]
    fn digit_overflow_is_reported() {
        let cfg = EncodeConfig::mnist();
        let atom = CaseData::Digits(DigitCase {
            digits: vec![1, 12, 3],
            tail: 6,
            layout: DigitLayout::ResultLast,
        })
        .atom();
        assert!(matches!(
            case_rows(&atom, &cfg),
            Err(CorpusError::VocabularyOverflow { value: 12, .. })
        ));
    }

    #[test]
    fn six_digits_do_not_fit() {
        let cfg = EncodeConfig::mnist();
        let atom = CaseData::Digits(DigitCase {
            digits: vec![1, 1, 1, 1, 1, 1],
            tail: 6,
            layout: DigitLayout::ResultLast,
        })
        .atom();
        assert!(matches!(
            case_rows(&atom, &cfg),
            Err(CorpusError::CaseTooLong { .. })
        ));
    }
}
