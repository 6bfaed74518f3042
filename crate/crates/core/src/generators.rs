//! Game families: random and covariant benchmark games, and the exact
//! constructions whose CURB structure is known in closed form.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CurbError, Result};
use crate::game::{AnyGame, Game, Player};
use crate::scalar::{Rational, Scalar};

/// Seeded generator used by every randomized family.
pub type GameRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> GameRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(CurbError::InvalidParameter("games need at least one strategy per player".into()));
    }
    Ok(())
}

/// Payoffs i.i.d. uniform on `[0, 1)`, row payoff then column payoff per
/// cell in row-major order.
pub fn random_game<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<Game<f64>> {
    check_dims(rows, cols)?;
    let cells = (0..rows * cols).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    Game::from_cells(rows, cols, cells)
}

/// A pair of independent standard normals by the Box–Muller transform.
fn standard_normal_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u1 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2 = rng.gen::<f64>();
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * PI * u2;
    (radius * angle.cos(), radius * angle.sin())
}

/// Each cell's `(u_r, u_c)` is bivariate standard normal with correlation
/// `rho`: `(z1, rho·z1 + sqrt(1 − rho²)·z2)`.
pub fn covariant_game<R: Rng + ?Sized>(rows: usize, cols: usize, rho: f64, rng: &mut R) -> Result<Game<f64>> {
    check_dims(rows, cols)?;
    if !(-1.0..=1.0).contains(&rho) {
        return Err(CurbError::InvalidParameter(format!("covariance {rho} outside [-1, 1]")));
    }
    let tail = (1.0 - rho * rho).sqrt();
    let cells = (0..rows * cols)
        .map(|_| {
            let (z1, z2) = standard_normal_pair(rng);
            (z1, rho * z1 + tail * z2)
        })
        .collect();
    Game::from_cells(rows, cols, cells)
}

/// Exact game with payoffs drawn uniformly from `grid`. Small grids produce
/// plenty of ties.
pub fn grid_game<R: Rng + ?Sized>(rows: usize, cols: usize, grid: &[Rational], rng: &mut R) -> Result<Game<Rational>> {
    check_dims(rows, cols)?;
    if grid.is_empty() {
        return Err(CurbError::InvalidParameter("empty payoff grid".into()));
    }
    let mut pick = || grid[rng.gen_range(0..grid.len())].clone();
    let cells = (0..rows * cols).map(|_| (pick(), pick())).collect();
    Game::from_cells(rows, cols, cells)
}

/// Row-major cell buffer addressed with 1-based strategy numbers.
struct Cells {
    cols: usize,
    data: Vec<(Rational, Rational)>,
}

impl Cells {
    fn new(rows: usize, cols: usize) -> Self {
        Cells { cols, data: vec![(Rational::from_int(0), Rational::from_int(0)); rows * cols] }
    }

    fn set(&mut self, r: usize, c: usize, row: Rational, col: Rational) {
        self.data[(r - 1) * self.cols + (c - 1)] = (row, col);
    }
}

fn frac(n: usize, d: usize) -> Rational {
    Rational::from_ratio(n as i64, d as i64)
}

fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

/// The `r' × c'` game whose only minimal CURB set is the whole game, while
/// every strategy is played in some equilibrium.
///
/// Rows and columns beyond the first two are built in pairs around the
/// matching-pennies corner, with a half-half row/column when the count is
/// odd. Cells where both strategies are beyond the second get `(−i, −j)`
/// (1-based), which matches the reference `3 × 4` instance.
pub fn gamma_game(r_prime: usize, c_prime: usize) -> Result<Game<Rational>> {
    if r_prime < 2 || c_prime < 2 {
        return Err(CurbError::InvalidParameter(format!(
            "gamma game needs at least 2 rows and 2 columns, got {r_prime}x{c_prime}"
        )));
    }
    let (rp, cp) = (r_prime, c_prime);
    let mut cells = Cells::new(rp, cp);
    for i in 3..=rp {
        for j in 3..=cp {
            cells.set(i, j, int(-(i as i64)), int(-(j as i64)));
        }
    }
    cells.set(1, 1, int(0), int(1));
    cells.set(2, 2, int(0), int(1));
    cells.set(1, 2, int(1), int(0));
    cells.set(2, 1, int(1), int(0));

    for i in 2..=rp / 2 {
        cells.set(2 * i - 1, 1, frac(rp + 2 - 2 * i, rp), int(1));
        cells.set(2 * i - 1, 2, frac(2 * i - 2, rp), int(0));
        cells.set(2 * i, 1, frac(rp + 1 - 2 * i, rp), int(0));
        cells.set(2 * i, 2, frac(2 * i - 1, rp), int(1));
    }
    if rp % 2 == 1 {
        cells.set(rp, 1, frac(1, rp), frac(1, 2));
        cells.set(rp, 2, frac(rp - 1, rp), frac(1, 2));
    }

    for j in 2..=cp / 2 {
        cells.set(1, 2 * j - 1, int(0), frac(cp + 2 - 2 * j, cp));
        cells.set(2, 2 * j - 1, int(1), frac(2 * j - 2, cp));
        cells.set(1, 2 * j, int(1), frac(cp + 1 - 2 * j, cp));
        cells.set(2, 2 * j, int(0), frac(2 * j - 1, cp));
    }
    if cp % 2 == 1 {
        cells.set(1, cp, frac(1, 2), frac(1, cp));
        cells.set(2, cp, frac(1, 2), frac(cp - 1, cp));
    }
    Game::from_cells(rp, cp, cells.data)
}

/// `Γ_{r'c'}` in the top-left corner, `Γ_{(r−r')(c−c')}` in the bottom-right
/// corner (when both remainders are nonzero), and distinct filler payoffs
/// everywhere else.
///
/// Filler cell `o` (row-major over filler cells, `total` of them) pays
/// `m − 1 − o/(total+1)` to both players, where `m = min(−1, smallest block
/// payoff)`. For blocks whose payoffs are all ≥ −1 this is `−2 − o/(total+1)`.
pub fn padded_game(rows: usize, cols: usize, r_prime: usize, c_prime: usize) -> Result<Game<Rational>> {
    if r_prime > rows || c_prime > cols {
        return Err(CurbError::InvalidParameter(format!("block {r_prime}x{c_prime} does not fit in {rows}x{cols}")));
    }
    let (dr, dc) = (rows - r_prime, cols - c_prime);
    if dr == 1 || dc == 1 {
        return Err(CurbError::InvalidParameter(format!(
            "padding remainders must be 0 or at least 2, got {dr} rows and {dc} columns"
        )));
    }
    let top = gamma_game(r_prime, c_prime)?;
    let bottom = if dr > 0 && dc > 0 { Some(gamma_game(dr, dc)?) } else { None };

    let mut floor = int(-1);
    for block in std::iter::once(&top).chain(bottom.as_ref()) {
        for r in 0..block.rows() {
            for c in 0..block.cols() {
                for p in Player::BOTH {
                    if *block.payoff(p, r, c) < floor {
                        floor = block.payoff(p, r, c).clone();
                    }
                }
            }
        }
    }

    let in_top = |r: usize, c: usize| r < r_prime && c < c_prime;
    let in_bottom = |r: usize, c: usize| bottom.is_some() && r >= r_prime && c >= c_prime;
    let total = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .filter(|&(r, c)| !in_top(r, c) && !in_bottom(r, c))
        .count();
    let mut ordinal = 0usize;
    let mut cells = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let cell = if in_top(r, c) {
                let (a, b) = top.cell(r, c);
                (a.clone(), b.clone())
            } else if in_bottom(r, c) {
                let (a, b) = bottom.as_ref().unwrap().cell(r - r_prime, c - c_prime);
                (a.clone(), b.clone())
            } else {
                let v = floor.clone() - int(1) - frac(ordinal, total + 1);
                ordinal += 1;
                (v.clone(), v)
            };
            cells.push(cell);
        }
    }
    Game::from_cells(rows, cols, cells)
}

/// The `(2+k) × (2+k)` game with one minimal CURB set (the whole game) and
/// a unique equilibrium supported on the matching-pennies corner.
///
/// The off-diagonal `(0, −Z)` / `(−Z, 0)` cells are filled for every
/// `i ≥ 2` and `i + 1 < j ≤ 2 + k`; starting at `i = 2` is what the
/// reference `Ω_2` table shows.
pub fn omega_game(k: usize, epsilon: Rational, big_z: Rational) -> Result<Game<Rational>> {
    if k == 0 {
        return Err(CurbError::InvalidParameter("omega game needs k >= 1".into()));
    }
    if epsilon <= int(0) || big_z <= int(0) {
        return Err(CurbError::InvalidParameter("omega game needs epsilon > 0 and Z > 0".into()));
    }
    let n = 2 + k;
    let z = big_z;
    let one_eps = int(1) + epsilon.clone();
    let mut cells = Cells::new(n, n);
    cells.set(1, 1, int(0), int(1));
    cells.set(2, 2, int(0), int(1));
    cells.set(1, 2, int(1), int(0));
    cells.set(2, 1, int(1), int(0));
    for i in 3..=n {
        cells.set(i, 1, -z.clone(), epsilon.clone());
        cells.set(1, i, epsilon.clone(), -z.clone());
        cells.set(i, i, int(0), int(0));
        cells.set(i, i - 1, one_eps.clone(), int(0));
        cells.set(i - 1, i, int(0), one_eps.clone());
    }
    for i in 2..=n {
        for j in (i + 2)..=n {
            cells.set(i, j, int(0), -z.clone());
            cells.set(j, i, -z.clone(), int(0));
        }
    }
    Game::from_cells(n, n, cells.data)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Random { rows: usize, cols: usize },
    Covariant { rows: usize, cols: usize, rho: f64 },
    Gamma { r_prime: usize, c_prime: usize },
    Padded { rows: usize, cols: usize, r_prime: usize, c_prime: usize },
    Omega { k: usize, epsilon: Rational, big_z: Rational },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Random { .. } => "random",
            Family::Covariant { .. } => "covariant",
            Family::Gamma { .. } => "gamma",
            Family::Padded { .. } => "padded",
            Family::Omega { .. } => "omega",
        }
    }
}

pub fn default_epsilon() -> Rational {
    Rational::from_ratio(1, 10)
}

pub fn default_big_z() -> Rational {
    Rational::from_int(10_000)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub rng_seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, rng_seed: u64) -> Self {
        GeneratorSpec { family, rng_seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CurbError::InvalidParameter(msg));
        match &self.family {
            Family::Random { rows, cols } => check_dims(*rows, *cols),
            Family::Covariant { rows, cols, rho } => {
                check_dims(*rows, *cols)?;
                if !(-1.0..=1.0).contains(rho) {
                    return bad(format!("covariance {rho} outside [-1, 1]"));
                }
                Ok(())
            }
            Family::Gamma { r_prime, c_prime } => {
                if *r_prime < 2 || *c_prime < 2 {
                    return bad("gamma game needs r' >= 2 and c' >= 2".into());
                }
                Ok(())
            }
            Family::Padded { rows, cols, r_prime, c_prime } => {
                if *r_prime < 2 || *c_prime < 2 || r_prime > rows || c_prime > cols {
                    return bad("padded game needs 2 <= r' <= r and 2 <= c' <= c".into());
                }
                if rows - r_prime == 1 || cols - c_prime == 1 {
                    return bad("padding remainders must be 0 or at least 2".into());
                }
                Ok(())
            }
            Family::Omega { k, epsilon, big_z } => {
                if *k == 0 || *epsilon <= int(0) || *big_z <= int(0) {
                    return bad("omega game needs k >= 1, epsilon > 0, Z > 0".into());
                }
                Ok(())
            }
        }
    }

    /// Same family, resized to `n` total strategies when the family is
    /// freely sized (`n/2` rows, the rest columns). Constructed families are
    /// returned unchanged.
    pub fn with_total_size(&self, n: usize) -> GeneratorSpec {
        let rows = n / 2;
        let cols = n - rows;
        let family = match &self.family {
            Family::Random { .. } => Family::Random { rows, cols },
            Family::Covariant { rho, .. } => Family::Covariant { rows, cols, rho: *rho },
            other => other.clone(),
        };
        GeneratorSpec { family, rng_seed: self.rng_seed }
    }

    pub fn generate(&self) -> Result<AnyGame> {
        self.validate()?;
        let mut rng = seeded_rng(self.rng_seed);
        Ok(match &self.family {
            Family::Random { rows, cols } => AnyGame::Float(random_game(*rows, *cols, &mut rng)?),
            Family::Covariant { rows, cols, rho } => AnyGame::Float(covariant_game(*rows, *cols, *rho, &mut rng)?),
            Family::Gamma { r_prime, c_prime } => AnyGame::Rational(gamma_game(*r_prime, *c_prime)?),
            Family::Padded { rows, cols, r_prime, c_prime } => {
                AnyGame::Rational(padded_game(*rows, *cols, *r_prime, *c_prime)?)
            }
            Family::Omega { k, epsilon, big_z } => AnyGame::Rational(omega_game(*k, epsilon.clone(), big_z.clone())?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_games::q;

    fn table(g: &Game<Rational>) -> Vec<Vec<(Rational, Rational)>> {
        (0..g.rows())
            .map(|r| (0..g.cols()).map(|c| (g.cell(r, c).0.clone(), g.cell(r, c).1.clone())).collect())
            .collect()
    }

    #[test]
    fn gamma_three_by_four_reference_table() {
        let g = gamma_game(3, 4).unwrap();
        let expected = vec![
            vec![(q(0, 1), q(1, 1)), (q(1, 1), q(0, 1)), (q(0, 1), q(1, 2)), (q(1, 1), q(1, 4))],
            vec![(q(1, 1), q(0, 1)), (q(0, 1), q(1, 1)), (q(1, 1), q(1, 2)), (q(0, 1), q(3, 4))],
            vec![(q(1, 3), q(1, 2)), (q(2, 3), q(1, 2)), (q(-3, 1), q(-3, 1)), (q(-3, 1), q(-4, 1))],
        ];
        assert_eq!(table(&g), expected);
    }

    #[test]
    fn gamma_two_by_two_is_matching_pennies() {
        let g = gamma_game(2, 2).unwrap();
        let expected = vec![vec![(q(0, 1), q(1, 1)), (q(1, 1), q(0, 1))], vec![(q(1, 1), q(0, 1)), (q(0, 1), q(1, 1))]];
        assert_eq!(table(&g), expected);
    }

    #[test]
    fn gamma_four_by_two_extra_rows() {
        let g = gamma_game(4, 2).unwrap();
        assert_eq!(g.cell(2, 0), (&q(1, 2), &q(1, 1)));
        assert_eq!(g.cell(2, 1), (&q(1, 2), &q(0, 1)));
        assert_eq!(g.cell(3, 0), (&q(1, 4), &q(0, 1)));
        assert_eq!(g.cell(3, 1), (&q(3, 4), &q(1, 1)));
    }

    #[test]
    fn gamma_rejects_small_parameters() {
        assert!(gamma_game(1, 3).is_err());
        assert!(gamma_game(3, 1).is_err());
    }

    #[test]
    fn omega_two_reference_table() {
        let (e, z) = (q(1, 10), q(10_000, 1));
        let g = omega_game(2, e.clone(), z.clone()).unwrap();
        let one_e = q(11, 10);
        let zero = q(0, 1);
        let expected = vec![
            vec![(zero.clone(), q(1, 1)), (q(1, 1), zero.clone()), (e.clone(), -z.clone()), (e.clone(), -z.clone())],
            vec![
                (q(1, 1), zero.clone()),
                (zero.clone(), q(1, 1)),
                (zero.clone(), one_e.clone()),
                (zero.clone(), -z.clone()),
            ],
            vec![
                (-z.clone(), e.clone()),
                (one_e.clone(), zero.clone()),
                (zero.clone(), zero.clone()),
                (zero.clone(), one_e.clone()),
            ],
            vec![
                (-z.clone(), e.clone()),
                (-z.clone(), zero.clone()),
                (one_e.clone(), zero.clone()),
                (zero.clone(), zero.clone()),
            ],
        ];
        assert_eq!(table(&g), expected);
    }

    #[test]
    fn omega_last_row_points_back_to_first_column() {
        let g = omega_game(3, q(1, 10), q(10_000, 1)).unwrap();
        let last = g.rows() - 1;
        let best = (0..g.cols())
            .max_by(|&a, &b| g.payoff(Player::Col, last, a).partial_cmp(g.payoff(Player::Col, last, b)).unwrap());
        assert_eq!(best, Some(0));
    }

    #[test]
    fn omega_rejects_bad_parameters() {
        assert!(omega_game(0, q(1, 10), q(5, 1)).is_err());
        assert!(omega_game(2, q(0, 1), q(5, 1)).is_err());
        assert!(omega_game(2, q(1, 10), q(-5, 1)).is_err());
    }

    #[test]
    fn padded_without_padding_is_gamma() {
        assert_eq!(padded_game(2, 2, 2, 2).unwrap(), gamma_game(2, 2).unwrap());
    }

    #[test]
    fn padded_fillers_are_distinct_and_below_blocks() {
        let g = padded_game(7, 6, 3, 4).unwrap();
        let mut fillers = Vec::new();
        let mut block_min = q(0, 1);
        for r in 0..7 {
            for c in 0..6 {
                let in_block = (r < 3 && c < 4) || (r >= 3 && c >= 4);
                let (a, b) = g.cell(r, c);
                if in_block {
                    block_min = block_min.min(a.clone()).min(b.clone());
                } else {
                    assert_eq!(a, b);
                    fillers.push(a.clone());
                }
            }
        }
        let n = fillers.len();
        fillers.sort();
        fillers.dedup();
        assert_eq!(fillers.len(), n);
        assert!(fillers.iter().all(|f| *f < block_min));
    }

    #[test]
    fn padded_filler_schedule_for_small_blocks() {
        let g = padded_game(4, 4, 2, 2).unwrap();
        // 8 filler cells, first is (0, 2).
        assert_eq!(*g.payoff(Player::Row, 0, 2), q(-2, 1));
        assert_eq!(*g.payoff(Player::Row, 0, 3), q(-2, 1) - q(1, 9));
    }

    #[test]
    fn padded_rejects_remainder_one() {
        assert!(padded_game(3, 4, 2, 2).is_err());
        assert!(padded_game(4, 3, 2, 2).is_err());
        assert!(padded_game(4, 5, 2, 2).is_ok());
        assert!(padded_game(2, 2, 3, 2).is_err());
    }

    #[test]
    fn random_entries_in_unit_interval_and_reproducible() {
        let a = random_game(6, 5, &mut seeded_rng(9)).unwrap();
        let b = random_game(6, 5, &mut seeded_rng(9)).unwrap();
        assert_eq!(a, b);
        for r in 0..6 {
            for c in 0..5 {
                for p in Player::BOTH {
                    let v = *a.payoff(p, r, c);
                    assert!((0.0..1.0).contains(&v));
                }
            }
        }
    }

    #[test]
    fn perfectly_correlated_cells_agree() {
        let g = covariant_game(8, 8, 1.0, &mut seeded_rng(4)).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                assert!((g.payoff(Player::Row, r, c) - g.payoff(Player::Col, r, c)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn uncorrelated_cells_have_small_sample_correlation() {
        let g = covariant_game(100, 100, 0.0, &mut seeded_rng(11)).unwrap();
        let xs: Vec<(f64, f64)> = (0..100)
            .flat_map(|r| (0..100).map(move |c| (r, c)))
            .map(|(r, c)| (*g.payoff(Player::Row, r, c), *g.payoff(Player::Col, r, c)))
            .collect();
        let n = xs.len() as f64;
        let (mx, my) = xs.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (x, y) in &xs {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
            syy += (y - my) * (y - my);
        }
        let corr = sxy / (sxx * syy).sqrt();
        assert!(corr.abs() < 0.05, "sample correlation {corr}");
    }

    #[test]
    fn covariant_rejects_out_of_range_rho() {
        assert!(covariant_game(2, 2, 1.5, &mut seeded_rng(0)).is_err());
    }

    #[test]
    fn spec_resizes_only_free_families() {
        let spec = GeneratorSpec::new(Family::Random { rows: 1, cols: 1 }, 5);
        assert_eq!(spec.with_total_size(20).family, Family::Random { rows: 10, cols: 10 });
        let spec = GeneratorSpec::new(Family::Gamma { r_prime: 3, c_prime: 4 }, 5);
        assert_eq!(spec.with_total_size(20).family, Family::Gamma { r_prime: 3, c_prime: 4 });
    }
}
