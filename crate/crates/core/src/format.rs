//! The canonical text format for games.
//!
//! ```text
//! curbkit-game v1
//! <rows> <cols>
//! <u_r(0,0)> <u_c(0,0)>  <u_r(0,1)> <u_c(0,1)> ...
//! ```
//!
//! One matrix row per line. `#` starts a comment; blank lines are ignored.
//! Payoffs are `p/q` or integers (exact game) or decimals (float game). A
//! file with any `p/q` token is exact, a file with any decimal token is
//! float, and a file holding both is rejected. Integer-only files are exact.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{CurbError, Result};
use crate::game::{AnyGame, Game, Player};
use crate::scalar::{Rational, Scalar};

pub const HEADER: &str = "curbkit-game v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Style {
    Integer,
    Fraction,
    Decimal,
}

fn style_of(token: &str) -> Style {
    if token.contains('/') {
        Style::Fraction
    } else if token.chars().all(|ch| ch.is_ascii_digit() || ch == '-' || ch == '+') {
        Style::Integer
    } else {
        Style::Decimal
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> CurbError {
    CurbError::Parse { line, message: message.into() }
}

fn parse_bigint(token: &str, line: usize) -> Result<BigInt> {
    token.parse::<BigInt>().map_err(|_| parse_error(line, format!("'{token}' is not an integer")))
}

fn parse_rational(token: &str, line: usize) -> Result<Rational> {
    match token.split_once('/') {
        Some((n, d)) => {
            let n = parse_bigint(n, line)?;
            let d = parse_bigint(d, line)?;
            if d == BigInt::from(0) {
                return Err(parse_error(line, format!("zero denominator in '{token}'")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(parse_bigint(token, line)?)),
    }
}

fn parse_float(token: &str, line: usize) -> Result<f64> {
    let v: f64 = token.parse().map_err(|_| parse_error(line, format!("'{token}' is not a number")))?;
    if !v.is_finite() {
        return Err(parse_error(line, format!("non-finite payoff '{token}'")));
    }
    Ok(v)
}

/// Parses a game, inferring its numeric mode from the payoff tokens.
pub fn parse_game(text: &str) -> Result<AnyGame> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((n, l)) => return Err(parse_error(n, format!("expected header '{HEADER}', found '{l}'"))),
        None => return Err(parse_error(0, "empty input")),
    }
    let (dim_line, dims) = lines.next().ok_or_else(|| parse_error(0, "missing dimensions line"))?;
    let dims: Vec<&str> = dims.split_whitespace().collect();
    let [rows, cols] = dims[..] else {
        return Err(parse_error(dim_line, "dimensions line must be '<rows> <cols>'"));
    };
    let parse_dim = |t: &str| -> Result<usize> {
        match t.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(parse_error(dim_line, format!("invalid dimension '{t}'"))),
        }
    };
    let (rows, cols) = (parse_dim(rows)?, parse_dim(cols)?);

    let mut tokens: Vec<(usize, &str)> = Vec::with_capacity(2 * rows * cols);
    let mut seen_rows = 0;
    for (n, l) in lines {
        seen_rows += 1;
        if seen_rows > rows {
            return Err(parse_error(n, format!("more than {rows} matrix rows")));
        }
        let row: Vec<&str> = l.split_whitespace().collect();
        if row.len() != 2 * cols {
            return Err(parse_error(n, format!("expected {} payoffs ({cols} cells), found {}", 2 * cols, row.len())));
        }
        tokens.extend(row.into_iter().map(|t| (n, t)));
    }
    if seen_rows != rows {
        return Err(parse_error(0, format!("expected {rows} matrix rows, found {seen_rows}")));
    }

    let fraction = tokens.iter().find(|(_, t)| style_of(t) == Style::Fraction);
    let decimal = tokens.iter().find(|(_, t)| style_of(t) == Style::Decimal);
    match (fraction, decimal) {
        (Some(_), Some(&(n, t))) => {
            Err(parse_error(n, format!("decimal payoff '{t}' in a file that also uses fractions")))
        }
        (_, Some(_)) => {
            let values = tokens.iter().map(|&(n, t)| parse_float(t, n)).collect::<Result<Vec<_>>>()?;
            Ok(AnyGame::Float(build(rows, cols, values)?))
        }
        _ => {
            let values = tokens.iter().map(|&(n, t)| parse_rational(t, n)).collect::<Result<Vec<_>>>()?;
            Ok(AnyGame::Rational(build(rows, cols, values)?))
        }
    }
}

fn build<T: Scalar>(rows: usize, cols: usize, values: Vec<T>) -> Result<Game<T>> {
    let mut it = values.into_iter();
    let cells = std::iter::from_fn(|| Some((it.next()?, it.next()?))).collect();
    Game::from_cells(rows, cols, cells)
}

/// Writes `game` in the canonical format. Floats are written so they parse
/// back to the same bits.
pub fn serialize_game<T: Scalar>(game: &Game<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "{} {}", game.rows(), game.cols());
    for r in 0..game.rows() {
        let cells: Vec<String> = (0..game.cols())
            .map(|c| {
                format!("{} {}", game.payoff(Player::Row, r, c).to_token(), game.payoff(Player::Col, r, c).to_token())
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  "));
    }
    out
}

pub fn serialize_any(game: &AnyGame) -> String {
    match game {
        AnyGame::Rational(g) => serialize_game(g),
        AnyGame::Float(g) => serialize_game(g),
    }
}
