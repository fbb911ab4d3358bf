//! Budgeted coordinator/worker parallel reverse search.
//!
//! The coordinator owns a queue of work units, each a verified and not yet
//! visited reverse-search subtree root. A worker expands the subtree under
//! its unit depth-first, emits at most `budget` nodes, and hands every
//! unexplored subtree root back to the queue. Subtrees are disjoint, so the
//! final counters are exact and independent of scheduling; a unit lost to a
//! worker panic is reissued, never duplicated. Draining the queue at a unit
//! boundary yields a consistent checkpoint.

use std::collections::VecDeque;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::checkpoint::Checkpoint;
use super::engine::Engine;
use super::EnumerationStats;
use crate::config::PointConfig;
use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

/// A pending unit of reverse-search work: a subtree root and the maximum
/// number of nodes to expand before handing the remainder back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkUnit {
    pub node: Triangulation,
    pub budget: u64,
    pub depth: usize,
}

/// Outcome of a coordinator run.
#[derive(Debug)]
pub enum RunOutcome {
    Complete(EnumerationStats),
    /// Stopped at a queue boundary with work remaining; the coordinator can
    /// be checkpointed or resumed.
    Paused,
}

#[derive(Clone)]
struct RankedUnit {
    cells: Vec<u32>,
    depth: u32,
    budget: u64,
    poison: bool,
}

enum ToWorker {
    Unit(RankedUnit),
    Quit,
}

enum UnitOutcome {
    Done {
        visited: u64,
        flip_edges: u64,
        max_depth: u32,
        leftover: Vec<(Vec<u32>, u32)>,
    },
    Failed,
    Error(Error),
}

struct FromWorker {
    worker: usize,
    outcome: UnitOutcome,
}

/// Resumable driver for budgeted parallel enumeration.
pub struct Coordinator {
    engine: Engine,
    queue: VecDeque<RankedUnit>,
    visited: BigUint,
    flip_edges: BigUint,
    max_depth: usize,
    budget: u64,
    dispatched: u64,
    fault_inject_unit: Option<u64>,
}

impl Coordinator {
    /// Fresh run seeded with the reverse-search root.
    pub fn new(cfg: &PointConfig, budget: u64) -> Result<Self> {
        assert!(budget >= 1, "budget must be positive");
        let engine = Engine::new(cfg)?;
        let mut scratch = engine.scratch();
        let root = engine.root_ranked(&mut scratch)?;
        let mut queue = VecDeque::new();
        queue.push_back(RankedUnit {
            cells: root,
            depth: 0,
            budget,
            poison: false,
        });
        Ok(Coordinator {
            engine,
            queue,
            visited: BigUint::zero(),
            flip_edges: BigUint::zero(),
            max_depth: 0,
            budget,
            dispatched: 0,
            fault_inject_unit: None,
        })
    }

    /// Resume from a saved queue. The checkpoint must carry the same (n,d).
    pub fn from_checkpoint(cfg: &PointConfig, ckpt: &Checkpoint, budget: u64) -> Result<Self> {
        assert!(budget >= 1, "budget must be positive");
        if (ckpt.n, ckpt.d) != (cfg.n(), cfg.d()) {
            return Err(Error::CheckpointFormat(format!(
                "checkpoint is for C({},{}), not {cfg}",
                ckpt.n, ckpt.d
            )));
        }
        let engine = Engine::new(cfg)?;
        let mut queue = VecDeque::new();
        for unit in &ckpt.units {
            if unit.budget < 1 {
                return Err(Error::CheckpointFormat(format!(
                    "unit {} has zero budget",
                    unit.node
                )));
            }
            queue.push_back(RankedUnit {
                cells: engine.to_ranked(&unit.node)?,
                depth: unit.depth as u32,
                budget: unit.budget,
                poison: false,
            });
        }
        Ok(Coordinator {
            engine,
            queue,
            visited: ckpt.visited.clone(),
            flip_edges: ckpt.flip_edges.clone(),
            max_depth: ckpt.max_depth,
            budget,
            dispatched: 0,
            fault_inject_unit: None,
        })
    }

    /// Snapshot the pending queue and partial counters. Callable only at a
    /// queue boundary (no in-flight units), which `run_until` guarantees on
    /// return.
    pub fn checkpoint(&self) -> Checkpoint {
        let cfg = self.engine.cfg();
        Checkpoint {
            n: cfg.n(),
            d: cfg.d(),
            units: self
                .queue
                .iter()
                .map(|u| WorkUnit {
                    node: self.engine.to_triangulation(&u.cells),
                    budget: u.budget,
                    depth: u.depth as usize,
                })
                .collect(),
            visited: self.visited.clone(),
            flip_edges: self.flip_edges.clone(),
            max_depth: self.max_depth,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn visited(&self) -> &BigUint {
        &self.visited
    }

    /// Panic while expanding the k-th dispatched unit (0-based), once, to
    /// exercise the reissue path.
    #[doc(hidden)]
    pub fn fault_inject_unit(&mut self, unit_index: u64) {
        self.fault_inject_unit = Some(unit_index);
    }

    fn stats(&self, started: Instant) -> EnumerationStats {
        let tree_edge_count = if self.visited.is_zero() {
            BigUint::zero()
        } else {
            &self.visited - BigUint::one()
        };
        EnumerationStats {
            triangulation_count: self.visited.clone(),
            tree_edge_count,
            flip_edge_count: self.flip_edges.clone(),
            max_tree_depth: self.max_depth,
            wall_time: started.elapsed(),
        }
    }

    /// Run to completion.
    pub fn run(&mut self, workers: usize) -> Result<EnumerationStats> {
        match self.run_until(workers, |_| false)? {
            RunOutcome::Complete(stats) => Ok(stats),
            RunOutcome::Paused => unreachable!("run without stop cannot pause"),
        }
    }

    /// Run until the queue drains or `stop` returns true. `stop` is polled
    /// with the running visit count after every completed unit; on pause the
    /// coordinator waits for in-flight units to land, leaving a clean queue
    /// boundary.
    pub fn run_until(
        &mut self,
        workers: usize,
        mut stop: impl FnMut(&BigUint) -> bool,
    ) -> Result<RunOutcome> {
        assert!(workers >= 1, "need at least one worker");
        let started = Instant::now();
        let engine = &self.engine;
        let (result_tx, result_rx) = mpsc::channel::<FromWorker>();
        let mut run_error: Option<Error> = None;
        let mut pausing = false;

        thread::scope(|scope| {
            let mut to_workers = Vec::with_capacity(workers);
            for worker in 0..workers {
                let (tx, rx) = mpsc::channel::<ToWorker>();
                to_workers.push(tx);
                let result_tx = result_tx.clone();
                scope.spawn(move || {
                    let mut scratch = engine.scratch();
                    while let Ok(ToWorker::Unit(unit)) = rx.recv() {
                        let outcome = match catch_unwind(AssertUnwindSafe(|| {
                            if unit.poison {
                                panic!("injected worker fault");
                            }
                            engine.expand(
                                &mut scratch,
                                unit.cells.clone(),
                                unit.depth,
                                unit.budget,
                                |_, _, _, _| true,
                            )
                        })) {
                            Ok(Ok(exp)) => UnitOutcome::Done {
                                visited: exp.visited,
                                flip_edges: exp.flip_edges,
                                max_depth: exp.max_depth,
                                leftover: exp.leftover,
                            },
                            Ok(Err(e)) => UnitOutcome::Error(e),
                            Err(_) => UnitOutcome::Failed,
                        };
                        if result_tx.send(FromWorker { worker, outcome }).is_err() {
                            break;
                        }
                    }
                });
            }

            let mut idle: Vec<usize> = (0..workers).rev().collect();
            let mut in_flight: Vec<Option<RankedUnit>> = vec![None; workers];
            let mut active = 0usize;

            loop {
                if !pausing && run_error.is_none() {
                    while !self.queue.is_empty() && !idle.is_empty() {
                        let mut unit = self.queue.pop_front().unwrap();
                        if self.fault_inject_unit == Some(self.dispatched) {
                            unit.poison = true;
                        }
                        self.dispatched += 1;
                        let w = idle.pop().unwrap();
                        in_flight[w] = Some(unit.clone());
                        active += 1;
                        if to_workers[w].send(ToWorker::Unit(unit)).is_err() {
                            // worker thread is gone; its unit will be reissued below
                        }
                    }
                }
                if active == 0 {
                    break;
                }
                let msg = result_rx.recv().expect("all workers disconnected");
                let unit = in_flight[msg.worker]
                    .take()
                    .expect("result from idle worker");
                active -= 1;
                idle.push(msg.worker);
                match msg.outcome {
                    UnitOutcome::Done {
                        visited,
                        flip_edges,
                        max_depth,
                        leftover,
                    } => {
                        self.visited += visited;
                        self.flip_edges += flip_edges;
                        self.max_depth = self.max_depth.max(max_depth as usize);
                        for (cells, depth) in leftover {
                            self.queue.push_back(RankedUnit {
                                cells,
                                depth,
                                budget: self.budget,
                                poison: false,
                            });
                        }
                    }
                    UnitOutcome::Failed => {
                        // replace, not duplicate: the lost subtree goes back
                        // to the front of the queue with a clean unit
                        self.queue.push_front(RankedUnit {
                            poison: false,
                            ..unit
                        });
                    }
                    UnitOutcome::Error(e) => {
                        if run_error.is_none() {
                            run_error = Some(e);
                        }
                    }
                }
                if !pausing && stop(&self.visited) {
                    pausing = true;
                }
            }

            for tx in &to_workers {
                let _ = tx.send(ToWorker::Quit);
            }
        });

        if let Some(e) = run_error {
            return Err(e);
        }
        if self.queue.is_empty() {
            Ok(RunOutcome::Complete(self.stats(started)))
        } else {
            Ok(RunOutcome::Paused)
        }
    }
}

/// Enumerate in parallel with the given worker count and node budget per
/// work unit. The count is exactly that of the serial enumeration for every
/// `(workers, budget)` pair.
pub fn enumerate_parallel(
    cfg: &PointConfig,
    workers: usize,
    budget: u64,
) -> Result<EnumerationStats> {
    assert!(workers >= 1, "need at least one worker");
    Coordinator::new(cfg, budget)?.run(workers)
}
