use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Seed for repeat `index`, taken from stream `index` of a ChaCha generator
/// keyed by `master`. Each repeat's seed depends only on its index.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

/// Splits `(id, group)` pairs so that no group has members on both sides.
///
/// Groups are shuffled by `seed` and moved to the training side until it
/// holds at least `ratio` of the items. The last group always stays on the
/// test side. Ids keep their input order within each side.
pub fn content_split<'a>(items: impl IntoIterator<Item = (&'a str, &'a str)>, ratio: f64, seed: u64) -> Result<Split> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidInput(format!(
            "split ratio must lie in (0, 1), got {ratio}"
        )));
    }
    let items: Vec<(&str, &str)> = items.into_iter().collect();
    let mut groups: Vec<&str> = items.iter().map(|&(_, g)| g).collect();
    groups.sort_unstable();
    groups.dedup();
    if groups.len() < 2 {
        return Err(Error::TooSmall {
            what: "content groups",
            min: 2,
            got: groups.len(),
        });
    }
    groups.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let target = ratio * items.len() as f64;
    let mut train_groups = Vec::new();
    let mut count = 0usize;
    for &g in &groups[..groups.len() - 1] {
        if count as f64 >= target {
            break;
        }
        count += items.iter().filter(|&&(_, h)| h == g).count();
        train_groups.push(g);
    }
    let (train, test): (Vec<_>, Vec<_>) = items.iter().partition(|&&(_, g)| train_groups.contains(&g));
    Ok(Split {
        train: train.into_iter().map(|&(id, _)| id.to_string()).collect(),
        test: test.into_iter().map(|&(id, _)| id.to_string()).collect(),
    })
}
