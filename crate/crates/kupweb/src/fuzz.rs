//! Seeded random diagrams and move orbits, shared by the invariance test
//! suites and the `fuzz` CLI subcommand.

use rand::rngs::StdRng;
use rand::Rng;

use crate::diagram::moves::{apply_move, enumerate_moves, MoveKind, MoveSite};
use crate::diagram::{parse_gauss, ChordDiagram, DecorationLevel, Role, Token};

/// Random one-circle free diagram on `n` chords.
pub fn random_free_diagram(n: usize, rng: &mut StdRng) -> ChordDiagram {
    let mut word: Vec<usize> = (1..=n).flat_map(|l| [l, l]).collect();
    for i in (1..word.len()).rev() {
        let j = rng.random_range(0..=i);
        word.swap(i, j);
    }
    let code: Vec<String> = word.iter().map(usize::to_string).collect();
    parse_gauss(&code.join(",")).unwrap()
}

/// Random one-circle virtual diagram: random word, random roles and signs.
pub fn random_virtual_diagram(n: usize, rng: &mut StdRng) -> ChordDiagram {
    let free = random_free_diagram(n, rng);
    let mut circles: Vec<Vec<Token>> = free.circles().to_vec();
    let mut first_role = vec![None; n];
    for circ in circles.iter_mut() {
        for t in circ.iter_mut() {
            let role = match first_role[t.label - 1] {
                None => {
                    let r = if rng.random_bool(0.5) { Role::Over } else { Role::Under };
                    first_role[t.label - 1] = Some(r);
                    r
                }
                Some(r) => r.flip(),
            };
            t.role = Some(role);
        }
    }
    let signs: Vec<Option<i8>> =
        (0..n).map(|_| Some(if rng.random_bool(0.5) { 1i8 } else { -1 })).collect();
    let code = ChordDiagram::from_decorated(circles, signs);
    parse_gauss(&code.code()).unwrap()
}

/// One random applicable move, respecting the allowed kinds and a growth cap.
pub fn random_move(
    d: &ChordDiagram,
    allowed: &[MoveKind],
    max_chords: usize,
    rng: &mut StdRng,
) -> Option<(MoveKind, MoveSite)> {
    let sites: Vec<(MoveKind, MoveSite)> = enumerate_moves(d)
        .into_iter()
        .filter(|(k, _)| allowed.contains(k))
        .filter(|(k, _)| match k {
            MoveKind::R1Add => d.num_chords() + 1 <= max_chords,
            MoveKind::R2Add => d.num_chords() + 2 <= max_chords,
            _ => true,
        })
        .collect();
    if sites.is_empty() {
        return None;
    }
    Some(sites[rng.random_range(0..sites.len())])
}

/// Apply a sequence of random moves; returns the visited diagrams (the start
/// excluded) and the moves taken.
pub fn random_orbit(
    start: &ChordDiagram,
    allowed: &[MoveKind],
    length: usize,
    max_chords: usize,
    rng: &mut StdRng,
) -> (Vec<ChordDiagram>, Vec<(MoveKind, MoveSite)>) {
    let mut out = Vec::with_capacity(length);
    let mut moves = Vec::with_capacity(length);
    let mut d = start.clone();
    for _ in 0..length {
        let Some(site) = random_move(&d, allowed, max_chords, rng) else { break };
        d = apply_move(&d, &site.1).expect("enumerated move applies");
        out.push(d.clone());
        moves.push(site);
    }
    (out, moves)
}

/// Move sets for the invariance suites.
pub fn virtual_isotopy_moves() -> Vec<MoveKind> {
    vec![MoveKind::R1Add, MoveKind::R1Remove, MoveKind::R2Add, MoveKind::R2Remove, MoveKind::R3]
}

/// Virtual isotopy plus the Z-move and virtualization (the odd-writhe and
/// normalized sl(3) invariance set).
pub fn z_stable_moves() -> Vec<MoveKind> {
    let mut m = virtual_isotopy_moves();
    m.push(MoveKind::ZMove);
    m.push(MoveKind::Virtualization);
    m
}

/// Everything, including crossing switches (free invariants).
pub fn free_moves() -> Vec<MoveKind> {
    let mut m = z_stable_moves();
    m.push(MoveKind::CrossingSwitch);
    m
}

impl ChordDiagram {
    /// Assemble a decorated diagram from explicit token circles and signs
    /// (testing helper; everything is re-validated by printing and parsing).
    pub fn from_decorated(circles: Vec<Vec<Token>>, signs: Vec<Option<i8>>) -> ChordDiagram {
        ChordDiagram::from_parts(circles, signs, DecorationLevel::Virtual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn orbits_stay_well_formed() {
        let mut rng = StdRng::seed_from_u64(40);
        for trial in 0..20 {
            let d = random_virtual_diagram(3 + trial % 3, &mut rng);
            let (orbit, _) = random_orbit(&d, &free_moves(), 30, 8, &mut rng);
            for x in &orbit {
                assert!(parse_gauss(&x.code()).is_ok());
            }
        }
    }

    #[test]
    fn odd_writhe_constant_without_switch() {
        let mut rng = StdRng::seed_from_u64(41);
        for trial in 0..60 {
            let d = random_virtual_diagram(2 + trial % 4, &mut rng);
            let j = d.odd_writhe().unwrap();
            let (orbit, moves) = random_orbit(&d, &z_stable_moves(), 25, 8, &mut rng);
            for (i, x) in orbit.iter().enumerate() {
                assert_eq!(
                    x.odd_writhe().unwrap(),
                    j,
                    "J changed after {:?} on {}",
                    moves[i],
                    d.code()
                );
            }
        }
    }
}
