//! Dynamic-programming evaluation of a compiled machine.
//!
//! Column `j` of the table holds every state reachable after reading `j`
//! input symbols, each with a back-pointer to the transition of the best
//! path reaching it. Paths are ordered by their per-transition weight
//! sequences, compared from the last weight backwards, so the best path to
//! a cell extends the best path to its predecessor cell and one back-pointer
//! per cell is enough. After the last column the best accepting cell is
//! chosen and the output is recovered by walking back-pointers.

use std::cmp::Ordering;

use thiserror::Error;

use crate::range_index::RangeIndex;
use crate::transducer::{StateId, Transducer};
use crate::types::{OutputString, Symbol, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("ambiguous input: equally weighted paths with different outputs meet after {column} symbol(s)")]
    AmbiguousAtRuntime { column: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackPointer {
    pub prev: StateId,
    pub transition: usize,
    pub weight: Weight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub state: StateId,
    /// `None` only for the initial cell of column 0.
    pub back: Option<BackPointer>,
    /// Column of the first tie between differing outputs on the best path.
    pub ambiguous_at: Option<usize>,
}

/// The filled table. Each column lists its non-empty cells by ascending state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpTable {
    columns: Vec<Vec<Cell>>,
}

impl DpTable {
    pub fn columns(&self) -> &[Vec<Cell>] {
        &self.columns
    }

    pub fn cell(&self, col: usize, q: StateId) -> Option<&Cell> {
        let column = self.columns.get(col)?;
        column
            .binary_search_by_key(&q, |c| c.state)
            .ok()
            .map(|i| &column[i])
    }

    /// States occupied in column `col`.
    pub fn states(&self, col: usize) -> Vec<StateId> {
        self.columns[col].iter().map(|c| c.state).collect()
    }
}

trait Table {
    fn get(&self, col: usize, q: StateId) -> Option<&Cell>;
}

impl Table for DpTable {
    fn get(&self, col: usize, q: StateId) -> Option<&Cell> {
        self.cell(col, q)
    }
}

struct Dense(Vec<Vec<Option<Cell>>>);

impl Table for Dense {
    fn get(&self, col: usize, q: StateId) -> Option<&Cell> {
        self.0[col][q].as_ref()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub cell_visits: usize,
    /// Breakpoint comparisons for the sparse layout, label tests for the
    /// dense one.
    pub probes: usize,
}

/// Column storage used while filling the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Ordered lists of occupied cells with range-index lookups.
    Sparse,
    /// A full `|Q| × (|x|+1)` matrix scanned with linear label tests.
    Dense,
}

/// A machine prepared for repeated evaluation: outgoing transitions and a
/// range index per state.
pub struct Evaluator<'t> {
    machine: &'t Transducer,
    outgoing: Vec<Vec<usize>>,
    indexes: Vec<RangeIndex>,
}

impl<'t> Evaluator<'t> {
    pub fn new(machine: &'t Transducer) -> Self {
        let outgoing = machine.outgoing();
        let indexes = outgoing
            .iter()
            .map(|ids| {
                let labels: Vec<_> = ids
                    .iter()
                    .map(|&i| machine.transitions()[i].label)
                    .collect();
                RangeIndex::build(&labels)
            })
            .collect();
        Evaluator {
            machine,
            outgoing,
            indexes,
        }
    }

    pub fn machine(&self) -> &Transducer {
        self.machine
    }

    /// Compares the best paths ending in `(col, a)` and `(col, b)` by their
    /// weight sequences, last weight first.
    fn compare_paths(
        table: &impl Table,
        mut col: usize,
        mut a: StateId,
        mut b: StateId,
    ) -> Ordering {
        while a != b && col > 0 {
            let ba = table
                .get(col, a)
                .and_then(|c| c.back)
                .expect("occupied cell");
            let bb = table
                .get(col, b)
                .and_then(|c| c.back)
                .expect("occupied cell");
            match ba.weight.cmp(&bb.weight) {
                Ordering::Equal => {}
                ord => return ord,
            }
            a = ba.prev;
            b = bb.prev;
            col -= 1;
        }
        Ordering::Equal
    }

    /// Outputs of the two paths ending in `(col, a)` and `(col, b)`, from
    /// the point where they last merged.
    fn diverging_outputs(
        &self,
        table: &impl Table,
        mut col: usize,
        mut a: StateId,
        mut b: StateId,
    ) -> (OutputString, OutputString) {
        let (mut oa, mut ob) = (Vec::new(), Vec::new());
        while a != b && col > 0 {
            let ba = table
                .get(col, a)
                .and_then(|c| c.back)
                .expect("occupied cell");
            let bb = table
                .get(col, b)
                .and_then(|c| c.back)
                .expect("occupied cell");
            oa.push(&self.machine.transitions()[ba.transition].effect.out);
            ob.push(&self.machine.transitions()[bb.transition].effect.out);
            a = ba.prev;
            b = bb.prev;
            col -= 1;
        }
        let join = |v: Vec<&OutputString>| {
            v.into_iter()
                .rev()
                .fold(OutputString::empty(), |mut acc, o| {
                    acc.push_str(o);
                    acc
                })
        };
        (join(oa), join(ob))
    }

    /// Offers transition `tid` from `(col, p)` as a way into `slot`, which
    /// lives in column `col + 1`.
    fn relax(
        &self,
        table: &impl Table,
        col: usize,
        from: &Cell,
        tid: usize,
        slot: &mut Option<Cell>,
    ) {
        let t = &self.machine.transitions()[tid];
        let p = from.state;
        let candidate = Cell {
            state: t.dst,
            back: Some(BackPointer {
                prev: p,
                transition: tid,
                weight: t.effect.weight,
            }),
            ambiguous_at: from.ambiguous_at,
        };
        let Some(current) = slot.as_mut() else {
            *slot = Some(candidate);
            return;
        };
        let cur = current.back.expect("non-initial cell");
        let ord = t
            .effect
            .weight
            .cmp(&cur.weight)
            .then_with(|| Self::compare_paths(table, col, p, cur.prev));
        if self.machine.policy().prefers(ord) {
            *current = candidate;
        } else if ord == Ordering::Equal {
            let (mut oa, mut ob) = self.diverging_outputs(table, col, p, cur.prev);
            oa.push_str(&t.effect.out);
            ob.push_str(&self.machine.transitions()[cur.transition].effect.out);
            let tie = (oa != ob).then_some(col + 1);
            current.ambiguous_at = [current.ambiguous_at, candidate.ambiguous_at, tie]
                .into_iter()
                .flatten()
                .min();
        }
    }

    fn fill_sparse(&self, input: &[Symbol], stats: &mut EvalStats) -> DpTable {
        let n = self.machine.state_count();
        let mut table = DpTable {
            columns: vec![vec![Cell {
                state: self.machine.initial(),
                back: None,
                ambiguous_at: None,
            }]],
        };
        let mut slot_of: Vec<usize> = vec![usize::MAX; n];
        for (col, &x) in input.iter().enumerate() {
            let mut next: Vec<Option<Cell>> = Vec::new();
            let mut touched: Vec<StateId> = Vec::new();
            for cell in &table.columns[col] {
                stats.cell_visits += 1;
                let p = cell.state;
                let (hits, probes) = self.indexes[p].lookup_counted(x);
                stats.probes += probes;
                for &k in hits {
                    let tid = self.outgoing[p][k];
                    let dst = self.machine.transitions()[tid].dst;
                    if slot_of[dst] == usize::MAX {
                        slot_of[dst] = next.len();
                        next.push(None);
                        touched.push(dst);
                    }
                    self.relax(&table, col, cell, tid, &mut next[slot_of[dst]]);
                }
            }
            for q in touched {
                slot_of[q] = usize::MAX;
            }
            let mut column: Vec<Cell> = next.into_iter().flatten().collect();
            column.sort_unstable_by_key(|c| c.state);
            table.columns.push(column);
        }
        stats.cell_visits += table.columns.last().map_or(0, Vec::len);
        table
    }

    fn fill_dense(&self, input: &[Symbol], stats: &mut EvalStats) -> DpTable {
        let n = self.machine.state_count();
        let mut dense = Dense(vec![vec![None; n]; input.len() + 1]);
        dense.0[0][self.machine.initial()] = Some(Cell {
            state: self.machine.initial(),
            back: None,
            ambiguous_at: None,
        });
        for (col, &x) in input.iter().enumerate() {
            let mut next: Vec<Option<Cell>> = vec![None; n];
            for p in 0..n {
                let Some(cell) = &dense.0[col][p] else {
                    continue;
                };
                stats.cell_visits += 1;
                for &tid in &self.outgoing[p] {
                    let t = &self.machine.transitions()[tid];
                    stats.probes += 1;
                    if t.label.contains(x) {
                        self.relax(&dense, col, cell, tid, &mut next[t.dst]);
                    }
                }
            }
            dense.0[col + 1] = next;
        }
        stats.cell_visits += dense.0.last().map_or(0, |c| c.iter().flatten().count());
        DpTable {
            columns: dense
                .0
                .into_iter()
                .map(|col| col.into_iter().flatten().collect())
                .collect(),
        }
    }

    pub fn trace_with(&self, input: &[Symbol], layout: Layout) -> (DpTable, EvalStats) {
        let mut stats = EvalStats::default();
        let table = match layout {
            Layout::Sparse => self.fill_sparse(input, &mut stats),
            Layout::Dense => self.fill_dense(input, &mut stats),
        };
        (table, stats)
    }

    pub fn trace(&self, input: &[Symbol]) -> DpTable {
        self.trace_with(input, Layout::Sparse).0
    }

    /// Picks the best accepting cell of the last column and reads the output
    /// off its path.
    pub fn resolve(&self, table: &DpTable) -> Result<Option<OutputString>, EvalError> {
        let last = table.columns.len() - 1;
        let policy = self.machine.policy();
        let mut best: Option<(StateId, Option<usize>)> = None;
        for cell in &table.columns[last] {
            let Some(fin) = self.machine.final_effect(cell.state) else {
                continue;
            };
            let Some((incumbent, flag)) = best.as_mut() else {
                best = Some((cell.state, cell.ambiguous_at));
                continue;
            };
            let other_tau = self.machine.final_effect(*incumbent).expect("accepting");
            let ord = fin
                .weight
                .cmp(&other_tau.weight)
                .then_with(|| Self::compare_paths(table, last, cell.state, *incumbent));
            if policy.prefers(ord) {
                best = Some((cell.state, cell.ambiguous_at));
            } else if ord == Ordering::Equal {
                let (mut oa, mut ob) = self.diverging_outputs(table, last, cell.state, *incumbent);
                oa.push_str(&fin.out);
                ob.push_str(&other_tau.out);
                let tie = (oa != ob).then_some(last);
                *flag = [*flag, cell.ambiguous_at, tie].into_iter().flatten().min();
            }
        }
        let Some((state, flag)) = best else {
            return Ok(None);
        };
        if let Some(column) = flag {
            return Err(EvalError::AmbiguousAtRuntime { column });
        }
        let mut pieces = vec![&self.machine.final_effect(state).expect("accepting").out];
        let (mut q, mut col) = (state, last);
        while let Some(back) = table.cell(col, q).and_then(|c| c.back) {
            pieces.push(&self.machine.transitions()[back.transition].effect.out);
            q = back.prev;
            col -= 1;
        }
        Ok(Some(pieces.into_iter().rev().fold(
            OutputString::empty(),
            |mut acc, o| {
                acc.push_str(o);
                acc
            },
        )))
    }

    pub fn evaluate(&self, input: &[Symbol]) -> Result<Option<OutputString>, EvalError> {
        self.resolve(&self.trace(input))
    }

    pub fn evaluate_str(&self, input: &str) -> Result<Option<OutputString>, EvalError> {
        let symbols: Vec<Symbol> = input.chars().map(Symbol::new).collect();
        self.evaluate(&symbols)
    }
}

/// One-shot evaluation. Prefer [`Evaluator`] when running many inputs.
pub fn evaluate(t: &Transducer, input: &[Symbol]) -> Result<Option<OutputString>, EvalError> {
    Evaluator::new(t).evaluate(input)
}

pub fn trace(t: &Transducer, input: &[Symbol]) -> DpTable {
    Evaluator::new(t).trace(input)
}
