//! Lavaurs' algorithm for the quadratic minor lamination, used only as an
//! independent oracle for minor unlinkedness.

use crate::angle::Angle;
use crate::chord::{linked, Chord};
use crate::error::Result;
use crate::lamination::Lamination;

/// Angles of exact period `k` under doubling, ascending.
pub fn exact_period_angles(k: u32) -> Vec<Angle> {
    assert!((1..=62).contains(&k), "period {k} out of range");
    let den: i64 = (1i64 << k) - 1;
    (0..den)
        .filter(|&n| {
            let a = Angle::frac(n, den);
            a.orbit_type(2) == (0, k as usize)
        })
        .map(|n| Angle::frac(n, den))
        .collect()
}

/// Period by period, join the smallest unpaired angle to the smallest larger
/// unpaired angle whose chord crosses nothing drawn so far.
pub fn lavaurs_chords(max_period: u32) -> Vec<Chord> {
    let mut chords: Vec<Chord> = Vec::new();
    for k in 2..=max_period {
        let mut free = exact_period_angles(k);
        while free.len() >= 2 {
            let a = free.remove(0);
            let j = (0..free.len())
                .find(|&j| {
                    let c = Chord::new(a.clone(), free[j].clone());
                    !chords.iter().any(|e| linked(e, &c))
                })
                .expect("Lavaurs pairing always finds a partner");
            let b = free.remove(j);
            chords.push(Chord::new(a, b));
        }
    }
    chords
}

/// The chords of [`lavaurs_chords`] as a degree-2 lamination.
pub fn lavaurs_qml(max_period: u32) -> Result<Lamination> {
    Lamination::new(2, 0, lavaurs_chords(max_period))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_two() {
        assert_eq!(lavaurs_chords(2), vec![Chord::frac(1, 3, 2, 3)]);
    }

    #[test]
    fn period_three() {
        let c = lavaurs_chords(3);
        for e in [
            Chord::frac(1, 7, 2, 7),
            Chord::frac(3, 7, 4, 7),
            Chord::frac(5, 7, 6, 7),
        ] {
            assert!(c.contains(&e), "{e}");
        }
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn period_four_pairs_every_angle() {
        // 12 angles of exact period 4
        assert_eq!(exact_period_angles(4).len(), 12);
        assert_eq!(lavaurs_chords(4).len(), 1 + 3 + 6);
        assert!(lavaurs_qml(6).is_ok());
    }
}
