//! The task registry: every grid-walk and digit-list task with its reference
//! rule, the clause-template subsets known to solve it, its case lengths, and
//! whether it is held out of the training mixture.

use crate::error::CorpusError;
use logic_core::MetaRuleId::{Chain, Identity, Inverse, Postcon, Recursion};
use logic_core::{parse_program, BackgroundDomain, Direction, Hypothesis, MetaRuleId};

/// Bumped whenever registry contents change; recorded in dataset manifests.
pub const REGISTRY_VERSION: u32 = 1;

/// Which background-knowledge family a task draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskDomain {
    Mario,
    Mnist,
}

impl TaskDomain {
    pub const ALL: [TaskDomain; 2] = [TaskDomain::Mario, TaskDomain::Mnist];

    pub fn name(self) -> &'static str {
        match self {
            TaskDomain::Mario => "mario",
            TaskDomain::Mnist => "mnist",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.name() == s)
    }

    /// Per-instance case caps `(cap_pos, cap_neg)`.
    pub fn caps(self) -> (usize, usize) {
        match self {
            TaskDomain::Mario => (20, 50),
            TaskDomain::Mnist => (10, 20),
        }
    }

    pub fn background(self) -> BackgroundDomain {
        match self {
            TaskDomain::Mario => BackgroundDomain::mario(),
            TaskDomain::Mnist => BackgroundDomain::mnist(),
        }
    }
}

/// One task: id, domain, labeling rule, known-sufficient template subsets,
/// admissible case lengths, and the held-out flag.
#[derive(Clone, Debug)]
pub struct TaskSpec {
    pub id: &'static str,
    pub domain: TaskDomain,
    /// Reference rule used to label cases; entails every positive, no negative.
    pub ground_truth_rule: Hypothesis,
    /// Template subsets that let the induction engine solve the task.
    pub sufficient_metarule_sets: Vec<Vec<MetaRuleId>>,
    /// States per case (grid walks) or digits in the primary list (digit tasks).
    pub case_lengths: &'static [usize],
    /// Held out of the training mixture; used only for generalization checks.
    pub unseen: bool,
}

impl TaskSpec {
    pub fn cap_pos(&self) -> usize {
        self.domain.caps().0
    }

    pub fn cap_neg(&self) -> usize {
        self.domain.caps().1
    }
}

fn spec(
    id: &'static str,
    domain: TaskDomain,
    rule: String,
    sufficient: Vec<Vec<MetaRuleId>>,
    case_lengths: &'static [usize],
    unseen: bool,
) -> TaskSpec {
    let clauses = parse_program(&rule).unwrap_or_else(|e| panic!("registry rule for {id}: {e}"));
    TaskSpec {
        id,
        domain,
        ground_truth_rule: Hypothesis { clauses },
        sufficient_metarule_sets: sufficient,
        case_lengths,
        unseen,
    }
}

fn priority_rule(primary: Direction, secondary: Direction) -> String {
    let (p, s) = (primary.pred_name(), secondary.pred_name());
    format!(
        "f(A,B):-{p}(A,C),f(C,B).\n\
         f(A,B):-f_1(A,B).\n\
         f_1(A,B):-{s}(A,C),f_1(C,B).\n\
         f_1(A,B):-terminate(A,B)."
    )
}

fn just_rule(d: Direction) -> String {
    let d = d.pred_name();
    format!(
        "f(A,B):-{d}(A,C),terminate(C,B).\n\
         f(A,B):-{d}(A,C),f_1(C,B).\n\
         f_1(A,B):-{d}(A,C),terminate(C,B)."
    )
}

fn one_step_rule(d: Direction) -> String {
    format!("f(A,B):-{}(A,C),terminate(C,B).", d.pred_name())
}

fn fold_priority_rule(first: &str, second: &str) -> String {
    format!(
        "f(A,B):-{first}(A,C),f(C,B).\n\
         f(A,B):-f_1(A,B).\n\
         f_1(A,B):-{second}(A,C),f_1(C,B).\n\
         f_1(A,B):-eq(A,B)."
    )
}

fn cumulative_rule(op: &str) -> String {
    format!(
        "f(A,B):-{op}(A,C),f(C,B).\n\
         f(A,B):-eq(A,B)."
    )
}

fn reverse_cumulative_rule(op: &str) -> String {
    format!(
        "f(A,B):-f_1(B,A).\n\
         f_1(A,B):-{op}(A,C),f_1(C,B).\n\
         f_1(A,B):-eq(A,B)."
    )
}

/// The secondary move of each priority variant: cyclically the next direction.
pub fn priority_secondary(primary: Direction) -> Direction {
    match primary {
        Direction::Right => Direction::Up,
        Direction::Up => Direction::Left,
        Direction::Left => Direction::Down,
        Direction::Down => Direction::Right,
    }
}

/// All tasks of both families, training variants first within each family.
pub fn registry() -> Vec<TaskSpec> {
    use Direction::{Down, Left, Right, Up};
    use TaskDomain::{Mario, Mnist};
    let walk = &[2usize, 3, 4, 5][..];
    let pair = &[2usize, 3][..];
    let single = &[2usize][..];
    let digits = &[3usize, 4, 5][..];

    let mut tasks = Vec::new();
    for (primary, unseen) in [(Right, false), (Up, false), (Left, false), (Down, true)] {
        let id: &'static str = match primary {
            Right => "right_priority",
            Up => "up_priority",
            Left => "left_priority",
            Down => "down_priority",
        };
        tasks.push(spec(
            id,
            Mario,
            priority_rule(primary, priority_secondary(primary)),
            vec![vec![Identity, Recursion]],
            walk,
            unseen,
        ));
    }
    for (d, unseen) in [(Up, false), (Down, false), (Left, false), (Right, true)] {
        let id: &'static str = match d {
            Up => "just_up",
            Down => "just_down",
            Left => "just_left",
            Right => "just_right",
        };
        tasks.push(spec(id, Mario, just_rule(d), vec![vec![Chain]], pair, unseen));
    }
    for (d, unseen) in [(Right, false), (Down, false), (Left, false), (Up, true)] {
        let id: &'static str = match d {
            Right => "right_one_step",
            Down => "down_one_step",
            Left => "left_one_step",
            Up => "up_one_step",
        };
        tasks.push(spec(id, Mario, one_step_rule(d), vec![vec![Chain]], single, unseen));
    }
    tasks.push(spec(
        "bomb_far",
        Mario,
        "f(A,B):-far(A,B),bomb(B).".to_string(),
        vec![vec![Postcon]],
        single,
        false,
    ));
    tasks.push(spec(
        "flower",
        Mario,
        "f(A,B):-right(A,C),f(C,B).\n\
         f(A,B):-f_1(A,B),flower(B).\n\
         f_1(A,B):-up(A,C),f_1(C,B).\n\
         f_1(A,B):-terminate(A,B),flower(B)."
            .to_string(),
        vec![vec![Postcon, Recursion]],
        walk,
        false,
    ));
    tasks.push(spec(
        "chess_jump",
        Mario,
        "f(A,B):-terminate(A,B),chess(B).\n\
         f(A,B):-jump(A,C),f(C,B)."
            .to_string(),
        vec![vec![Postcon, Recursion]],
        walk,
        false,
    ));

    tasks.push(spec(
        "add_priority",
        Mnist,
        fold_priority_rule("add", "multi"),
        vec![vec![Identity, Recursion]],
        digits,
        false,
    ));
    tasks.push(spec(
        "multi_priority",
        Mnist,
        fold_priority_rule("multi", "add"),
        vec![vec![Identity, Recursion]],
        digits,
        true,
    ));
    tasks.push(spec(
        "cumulative_sum",
        Mnist,
        cumulative_rule("add"),
        vec![vec![Identity, Recursion]],
        digits,
        false,
    ));
    tasks.push(spec(
        "cumulative_product",
        Mnist,
        cumulative_rule("multi"),
        vec![vec![Identity, Recursion]],
        digits,
        true,
    ));
    tasks.push(spec(
        "reverse_cumulative_sum",
        Mnist,
        reverse_cumulative_rule("add"),
        vec![vec![Inverse, Recursion]],
        digits,
        false,
    ));
    tasks.push(spec(
        "reverse_cumulative_product",
        Mnist,
        reverse_cumulative_rule("multi"),
        vec![vec![Inverse, Recursion]],
        digits,
        true,
    ));
    tasks.push(spec(
        "increasing",
        Mnist,
        "f(A,B):-less(A,C),f(C,B).\n\
         f(A,B):-less(A,B),zero(B)."
            .to_string(),
        vec![vec![Postcon, Recursion]],
        digits,
        false,
    ));
    tasks.push(spec(
        "decreasing",
        Mnist,
        "f(A,B):-f_1(B,A).\n\
         f_1(A,B):-more(A,C),f_1(C,B).\n\
         f_1(A,B):-more(A,B),zero(B)."
            .to_string(),
        vec![vec![Inverse, Postcon, Recursion]],
        digits,
        false,
    ));
    tasks
}

/// Look a task up by id.
pub fn find_task(id: &str) -> Result<TaskSpec, CorpusError> {
    registry()
        .into_iter()
        .find(|t| t.id == id)
        .ok_or_else(|| CorpusError::UnknownTask(id.to_string()))
}

/// Ids of all tasks that participate in the training mixture.
pub fn train_task_ids() -> Vec<&'static str> {
    registry()
        .into_iter()
        .filter(|t| !t.unseen)
        .map(|t| t.id)
        .collect()
}
