//! Renormalized moments N and normalized moments M for a few words.

use dt_moments::moments::{canonical_key, moment, n_value, MemoMode, MomentEngine, MomentKey};
use dt_moments::Result;

fn main() -> Result<()> {
    for text in [
        "3,3",
        "1,1,1,1",
        "2,2,2,2",
        "2,1,0,1",
        "1,2,2,1",
        "1,1,1,1,1,1",
        "2,1,1,2,1,1",
        "-1,-1",
        "1,0",
    ] {
        let key: MomentKey = text.parse()?;
        let n = n_value(&key);
        match key.is_nonnegative() {
            true => println!("N({key}) = {n}, M = {}", moment(&key)?),
            false => println!("N({key}) = {n}"),
        }
    }

    let key: MomentKey = "0,2,1,1,3,2".parse()?;
    println!("canonical form of ({key}) is ({})", canonical_key(&key)?);

    // Raw-key memoization gives the same values, with a larger table.
    let raw = MomentEngine::new(MemoMode::Raw);
    let canonical = MomentEngine::new(MemoMode::Canonical);
    let key = MomentKey::uniform(3, 3)?;
    assert_eq!(raw.n_value(&key), canonical.n_value(&key));
    println!(
        "N({key}) = {}; memo entries raw {} vs canonical {}",
        raw.n_value(&key),
        raw.memo_len(),
        canonical.memo_len()
    );
    Ok(())
}
