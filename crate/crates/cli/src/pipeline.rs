//! Fan-out over primes with in-order fan-in.
//!
//! A producer hands out `(index, item)` pairs, workers compute results in
//! any order, and the emitting thread holds early arrivals in a reorder
//! buffer until their predecessors are out. A fixed pool of tokens bounds
//! the number of items dispatched but not yet emitted, so memory stays at
//! `O(window)` results no matter how uneven the per-item cost is.

use std::collections::BTreeMap;
use std::thread;

use crossbeam_channel::{bounded, unbounded};

/// Results held in flight per worker.
const WINDOW_PER_JOB: usize = 4;

/// Applies `work` to every item and passes the results to `emit` in input
/// order. `emit` returning an error stops the pipeline and returns it.
pub fn run_ordered<I, T, W, E, Err>(items: I, jobs: usize, work: W, mut emit: E) -> Result<(), Err>
where
    I: Iterator + Send,
    I::Item: Send,
    T: Send,
    W: Fn(I::Item) -> T + Sync,
    E: FnMut(T) -> Result<(), Err>,
{
    let jobs = jobs.max(1);
    if jobs == 1 {
        for item in items {
            emit(work(item))?;
        }
        return Ok(());
    }

    let window = jobs * WINDOW_PER_JOB;
    let (token_tx, token_rx) = bounded::<()>(window);
    for _ in 0..window {
        token_tx.send(()).expect("receiver alive");
    }
    let (task_tx, task_rx) = bounded::<(usize, I::Item)>(jobs);
    let (result_tx, result_rx) = unbounded::<(usize, T)>();
    let work = &work;

    thread::scope(|scope| {
        scope.spawn(move || {
            for (idx, item) in items.enumerate() {
                if token_rx.recv().is_err() || task_tx.send((idx, item)).is_err() {
                    return;
                }
            }
        });
        for _ in 0..jobs {
            let task_rx = task_rx.clone();
            let result_tx = result_tx.clone();
            scope.spawn(move || {
                for (idx, item) in task_rx {
                    if result_tx.send((idx, work(item))).is_err() {
                        return;
                    }
                }
            });
        }
        drop(task_rx);
        drop(result_tx);

        let mut pending = BTreeMap::new();
        let mut next = 0usize;
        let mut outcome = Ok(());
        'recv: for (idx, result) in &result_rx {
            pending.insert(idx, result);
            while let Some(result) = pending.remove(&next) {
                if let Err(e) = emit(result) {
                    outcome = Err(e);
                    break 'recv;
                }
                next += 1;
                // Fails only after the producer has exited.
                let _ = token_tx.try_send(());
            }
        }
        // Unblock the producer and workers if we stopped early.
        drop(token_tx);
        drop(result_rx);
        outcome
    })
}
