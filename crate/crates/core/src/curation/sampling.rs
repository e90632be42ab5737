use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Split `target` across clusters in proportion to `sizes` by largest
/// remainders; equal remainders favour the lower cluster index. No cluster
/// receives more than its size.
pub fn allocate(sizes: &[usize], target: usize) -> Result<Vec<usize>> {
    let total: usize = sizes.iter().sum();
    if target > total {
        return Err(Error::Validation(format!(
            "cannot pick {target} items from a population of {total}"
        )));
    }
    if total == 0 {
        return Ok(vec![0; sizes.len()]);
    }
    // exact integer arithmetic: quota = target * size / total
    let mut alloc: Vec<usize> = sizes.iter().map(|&s| target * s / total).collect();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(target * sizes[i] % total), i));
    let mut left = target - alloc.iter().sum::<usize>();
    for &i in order.iter().cycle().take(order.len() * 2) {
        if left == 0 {
            break;
        }
        if alloc[i] < sizes[i] {
            alloc[i] += 1;
            left -= 1;
        }
    }
    debug_assert_eq!(left, 0);
    Ok(alloc)
}

/// Pick `per_class_target` item indices, spread over clusters in proportion
/// to their sizes. Within each cluster the picks are a seeded uniform draw;
/// any shortfall is topped up from the unselected items. Indices come back
/// sorted.
pub fn stratified_sample(assignment: &[usize], per_class_target: usize, seed: u64) -> Result<Vec<usize>> {
    let n_clusters = assignment.iter().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_clusters];
    for (i, &c) in assignment.iter().enumerate() {
        members[c].push(i);
    }
    let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
    let alloc = allocate(&sizes, per_class_target)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = vec![false; assignment.len()];
    let mut picked = Vec::with_capacity(per_class_target);
    for (pool, &take) in members.iter_mut().zip(&alloc) {
        pool.shuffle(&mut rng);
        for &i in pool.iter().take(take) {
            chosen[i] = true;
            picked.push(i);
        }
    }
    if picked.len() < per_class_target {
        let mut rest: Vec<usize> = (0..assignment.len()).filter(|&i| !chosen[i]).collect();
        rest.shuffle(&mut rng);
        picked.extend(rest.into_iter().take(per_class_target - picked.len()));
    }
    picked.sort_unstable();
    Ok(picked)
}
