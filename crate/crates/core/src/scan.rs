//! Chunked parallel scans with deterministic, canonical-order results.
//!
//! The index space is cut into fixed-size chunks independent of the thread
//! count; chunk results are merged in index order, so witness lists and
//! counts do not depend on the schedule.

use rayon::prelude::*;

const CHUNK: usize = 1024;

/// Collects findings: counts every push, stores the first `cap`.
#[derive(Debug)]
pub struct Sink<W> {
    count: u64,
    items: Vec<W>,
    cap: usize,
    tallies: [u64; 4],
}

impl<W> Sink<W> {
    fn new(cap: usize) -> Self {
        Sink {
            count: 0,
            items: Vec::new(),
            cap,
            tallies: [0; 4],
        }
    }

    /// Bumps an auxiliary counter (slot < 4) without recording a finding.
    pub fn tally(&mut self, slot: usize) {
        self.tallies[slot] += 1;
    }

    pub fn push(&mut self, w: W) {
        self.count += 1;
        if self.items.len() < self.cap {
            self.items.push(w);
        }
    }

    /// Pushes lazily: `make` runs only if the item will be stored.
    pub fn push_with(&mut self, make: impl FnOnce() -> W) {
        self.count += 1;
        if self.items.len() < self.cap {
            self.items.push(make());
        }
    }
}

/// Runs `visit` on every index in `0..len`; returns the total count and the
/// first `cap` findings in index order.
pub fn scan<W, F>(len: u64, cap: usize, visit: F) -> (u64, Vec<W>)
where
    W: Send,
    F: Fn(u64, &mut Sink<W>) + Sync,
{
    let (count, items, _) = scan_tallied(len, cap, visit);
    (count, items)
}

/// Like [`scan`], also returning the summed auxiliary tallies.
pub fn scan_tallied<W, F>(len: u64, cap: usize, visit: F) -> (u64, Vec<W>, [u64; 4])
where
    W: Send,
    F: Fn(u64, &mut Sink<W>) + Sync,
{
    let chunks = len.div_ceil(CHUNK as u64);
    let parts: Vec<Sink<W>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sink = Sink::new(cap);
            let start = c * CHUNK as u64;
            let end = (start + CHUNK as u64).min(len);
            for i in start..end {
                visit(i, &mut sink);
            }
            sink
        })
        .collect();
    let mut count = 0;
    let mut items = Vec::new();
    let mut tallies = [0; 4];
    for part in parts {
        count += part.count;
        for (t, p) in tallies.iter_mut().zip(part.tallies) {
            *t += p;
        }
        for w in part.items {
            if items.len() < cap {
                items.push(w);
            }
        }
    }
    (count, items, tallies)
}

/// Parallel fold of a per-index `u64` mask with bitwise AND.
pub fn and_fold<F>(len: u64, init: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync,
{
    (0..len).into_par_iter().map(&f).reduce(|| init, |a, b| a & b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_keeps_first_items_in_order() {
        let (count, items) = scan(5000, 3, |i, sink| {
            if i % 7 == 0 {
                sink.push(i);
            }
        });
        assert_eq!(count, 715);
        assert_eq!(items, vec![0, 7, 14]);
    }

    #[test]
    fn scan_is_schedule_independent() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| scan(10_000, 50, |i, s| if i % 13 == 5 { s.push(i) }))
        };
        assert_eq!(run(1), run(4));
    }
}
