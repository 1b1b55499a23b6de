//! Grid-walk case enumeration and near-miss mutation: move paths on the 3×3
//! grid with a pinned target cell and shared scene attributes.

use logic_core::{in_grid, Background, Direction, GridState, TargetType, JUMP_DELTAS};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn cells() -> impl Iterator<Item = (i64, i64)> {
    (0..3).flat_map(|r| (0..3).map(move |c| (r, c)))
}

/// Cells visited from `start` along `deltas` (start included); `None` if the
/// path leaves the grid.
fn cell_path(start: (i64, i64), deltas: &[(i64, i64)]) -> Option<Vec<(i64, i64)>> {
    let mut path = vec![start];
    for (dr, dc) in deltas {
        let (r, c) = *path.last().unwrap();
        let next = (r + dr, c + dc);
        if !in_grid(next.0, next.1) {
            return None;
        }
        path.push(next);
    }
    Some(path)
}

fn path_states(
    path: &[(i64, i64)],
    target: (i64, i64),
    ty: TargetType,
    bg: Background,
) -> Vec<GridState> {
    path.iter()
        .map(|(r, c)| GridState {
            m_row: *r,
            m_col: *c,
            t_row: target.0,
            t_col: target.1,
            target: ty,
            bg,
        })
        .collect()
}

/// All walks of the given delta sequences that end on the target, crossed
/// with the scene attributes.
fn walks(
    seqs: &[Vec<(i64, i64)>],
    types: &[TargetType],
    bgs: &[Background],
) -> Vec<Vec<GridState>> {
    let mut out = Vec::new();
    for seq in seqs {
        for start in cells() {
            let Some(path) = cell_path(start, seq) else {
                continue;
            };
            let target = *path.last().unwrap();
            for ty in types {
                for bg in bgs {
                    out.push(path_states(&path, target, *ty, *bg));
                }
            }
        }
    }
    out
}

/// `a` primary steps then `b` secondary steps, `1 ≤ a+b ≤ 4`.
fn priority_seqs(primary: Direction, secondary: Direction) -> Vec<Vec<(i64, i64)>> {
    let mut seqs = Vec::new();
    for a in 0..=4usize {
        for b in 0..=(4 - a) {
            if a + b == 0 {
                continue;
            }
            let mut seq = vec![primary.delta(); a];
            seq.extend(std::iter::repeat(secondary.delta()).take(b));
            seqs.push(seq);
        }
    }
    seqs
}

pub fn priority_space(primary: Direction, secondary: Direction) -> Vec<Vec<GridState>> {
    walks(
        &priority_seqs(primary, secondary),
        &TargetType::ALL,
        &Background::ALL,
    )
}

pub fn just_space(d: Direction) -> Vec<Vec<GridState>> {
    let seqs = vec![vec![d.delta()], vec![d.delta(); 2]];
    walks(&seqs, &TargetType::ALL, &Background::ALL)
}

pub fn one_step_space(d: Direction) -> Vec<Vec<GridState>> {
    walks(&[vec![d.delta()]], &TargetType::ALL, &Background::ALL)
}

pub fn flower_space() -> Vec<Vec<GridState>> {
    walks(
        &priority_seqs(Direction::Right, Direction::Up),
        &TargetType::ALL,
        &[Background::Flower],
    )
}

/// Diagonal-jump walks of 1..=4 jumps on the chess background.
pub fn chess_space() -> Vec<Vec<GridState>> {
    let mut seqs = Vec::new();
    for n in 1..=4usize {
        let mut stack: Vec<Vec<(i64, i64)>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for s in &stack {
                for d in JUMP_DELTAS {
                    let mut s2 = s.clone();
                    s2.push(d);
                    next.push(s2);
                }
            }
            stack = next;
        }
        seqs.extend(stack);
    }
    walks(&seqs, &TargetType::ALL, &[Background::Chess])
}

/// Two-state cases where one orthogonal step strictly increases the distance
/// to a bomb target; the target cell is free, not the walk's endpoint.
pub fn bomb_far_space() -> Vec<Vec<GridState>> {
    let mut out = Vec::new();
    for m in cells() {
        for t in cells() {
            for d in Direction::ALL {
                for bg in Background::ALL {
                    let s0 = GridState {
                        m_row: m.0,
                        m_col: m.1,
                        t_row: t.0,
                        t_col: t.1,
                        target: TargetType::Bomb,
                        bg,
                    };
                    match s0.step(d) {
                        Some(s1) if s1.manhattan() > s0.manhattan() => out.push(vec![s0, s1]),
                        _ => {}
                    }
                }
            }
        }
    }
    out
}

pub const NEAR_MISS_KINDS: usize = 5;

fn other_cell(cell: (i64, i64), rng: &mut ChaCha8Rng) -> (i64, i64) {
    let idx = cell.0 * 3 + cell.1;
    let new = (idx + 1 + rng.gen_range(0..8)) % 9;
    (new / 3, new % 3)
}

/// One-slot mutation of a positive walk. Kinds: 0 wrong mario cell,
/// 1 transposed intermediate step (apply the *next* move's delta first),
/// 2 wrong target cell, 3 flipped target type, 4 wrong background.
/// `None` when the kind has no valid site in this walk.
pub fn near_miss(states: &[GridState], kind: usize, rng: &mut ChaCha8Rng) -> Option<Vec<GridState>> {
    let mut out = states.to_vec();
    let i = rng.gen_range(0..states.len());
    match kind {
        0 => {
            let (r, c) = other_cell((out[i].m_row, out[i].m_col), rng);
            out[i].m_row = r;
            out[i].m_col = c;
        }
        1 => {
            let sites: Vec<usize> = (1..states.len().saturating_sub(1))
                .filter(|&j| {
                    let prev = (states[j - 1].m_row, states[j - 1].m_col);
                    let here = (states[j].m_row, states[j].m_col);
                    let next = (states[j + 1].m_row, states[j + 1].m_col);
                    let delta_next = (next.0 - here.0, next.1 - here.1);
                    let alt = (prev.0 + delta_next.0, prev.1 + delta_next.1);
                    in_grid(alt.0, alt.1) && alt != here
                })
                .collect();
            if sites.is_empty() {
                return None;
            }
            let j = sites[rng.gen_range(0..sites.len())];
            let prev = (states[j - 1].m_row, states[j - 1].m_col);
            let here = (states[j].m_row, states[j].m_col);
            let next = (states[j + 1].m_row, states[j + 1].m_col);
            out[j].m_row = prev.0 + (next.0 - here.0);
            out[j].m_col = prev.1 + (next.1 - here.1);
        }
        2 => {
            let (r, c) = other_cell((out[i].t_row, out[i].t_col), rng);
            out[i].t_row = r;
            out[i].t_col = c;
        }
        3 => {
            out[i].target = match out[i].target {
                TargetType::Coin => TargetType::Bomb,
                TargetType::Bomb => TargetType::Coin,
            };
        }
        4 => {
            let shift = 1 + rng.gen_range(0..2);
            out[i].bg = Background::ALL[(out[i].bg.index() + shift) % 3];
        }
        _ => unreachable!("walk near-miss kind out of range"),
    }
    Some(out)
}

/// Uniform random case-shaped walk: independent mario cells, one shared
/// random target cell, type, and background.
pub fn random_case(len: usize, rng: &mut ChaCha8Rng) -> Vec<GridState> {
    let t = (rng.gen_range(0..3), rng.gen_range(0..3));
    let ty = TargetType::ALL[rng.gen_range(0..TargetType::ALL.len())];
    let bg = Background::ALL[rng.gen_range(0..Background::ALL.len())];
    (0..len)
        .map(|_| GridState {
            m_row: rng.gen_range(0..3),
            m_col: rng.gen_range(0..3),
            t_row: t.0,
            t_col: t.1,
            target: ty,
            bg,
        })
        .collect()
}
