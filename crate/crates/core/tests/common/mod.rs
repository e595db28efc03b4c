//! Independent reference implementations used to cross-check the library.

#![allow(dead_code)]

use std::collections::VecDeque;

use active_time_core::instance::Instance;

/// Edmonds-Karp on a dense capacity matrix.
fn dense_max_flow(cap: &mut [Vec<i64>], s: usize, t: usize) -> i64 {
    let n = cap.len();
    let mut total = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            return total;
        }
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while v != s {
            bottleneck = bottleneck.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = t;
        while v != s {
            cap[prev[v]][v] -= bottleneck;
            cap[v][prev[v]] += bottleneck;
            v = prev[v];
        }
        total += bottleneck;
    }
}

/// Whether every job fits using only the slots in `mask`.
pub fn naive_feasible(mask: u64, inst: &Instance) -> bool {
    let horizon = inst.horizon() as usize;
    let n = inst.num_jobs();
    let s = 0;
    let t = 1 + n + horizon;
    let mut cap = vec![vec![0i64; t + 1]; t + 1];
    for (j, job) in inst.jobs().iter().enumerate() {
        cap[s][1 + j] = i64::from(job.length);
        for slot in job.release..job.deadline {
            if mask >> slot & 1 == 1 {
                cap[1 + j][1 + n + slot as usize] = 1;
            }
        }
    }
    for slot in 0..horizon {
        cap[1 + n + slot][t] = i64::from(inst.capacity());
    }
    dense_max_flow(&mut cap, s, t) == inst.total_work() as i64
}

/// Minimum number of open slots, by plain bitmask enumeration.
pub fn naive_opt(inst: &Instance) -> Option<usize> {
    let horizon = inst.horizon();
    assert!(horizon <= 16, "naive search is for tiny horizons");
    let mut masks: Vec<u64> = (0..1u64 << horizon).collect();
    masks.sort_by_key(|m| m.count_ones());
    masks
        .into_iter()
        .find(|&m| naive_feasible(m, inst))
        .map(|m| m.count_ones() as usize)
}

/// Backtracking search: machine `j` is idle in slots `0..empty[j]`; job `i`
/// needs `lengths[i]` idle cells in pairwise distinct slots.
pub fn brute_force_pack(empty: &[u32], lengths: &[u32]) -> bool {
    let mut used: Vec<Vec<bool>> = empty.iter().map(|&e| vec![false; e as usize]).collect();
    place_job(0, lengths, &mut used)
}

fn place_job(job: usize, lengths: &[u32], used: &mut Vec<Vec<bool>>) -> bool {
    if job == lengths.len() {
        return true;
    }
    let cells: Vec<(usize, usize)> = used
        .iter()
        .enumerate()
        .flat_map(|(m, row)| (0..row.len()).map(move |t| (m, t)))
        .collect();
    choose_cells(
        job,
        lengths[job] as usize,
        0,
        &cells,
        &mut Vec::new(),
        lengths,
        used,
    )
}

fn choose_cells(
    job: usize,
    need: usize,
    from: usize,
    cells: &[(usize, usize)],
    picked: &mut Vec<(usize, usize)>,
    lengths: &[u32],
    used: &mut Vec<Vec<bool>>,
) -> bool {
    if picked.len() == need {
        return place_job(job + 1, lengths, used);
    }
    for k in from..cells.len() {
        let (m, t) = cells[k];
        if used[m][t] || picked.iter().any(|&(_, pt)| pt == t) {
            continue;
        }
        used[m][t] = true;
        picked.push((m, t));
        if choose_cells(job, need, k + 1, cells, picked, lengths, used) {
            return true;
        }
        picked.pop();
        used[m][t] = false;
    }
    false
}

/// All non-increasing sequences of length `0..=max_len` over `lo..=hi`.
pub fn non_increasing_sequences(max_len: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            let top = seq.last().copied().unwrap_or(hi);
            for v in lo..=top {
                let mut s: Vec<u32> = seq.clone();
                s.push(v);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Every opening vector `x̃` with `0 <= x̃(i) <= pools[i]`.
pub fn all_openings(pools: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &l in pools {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..=l).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}
