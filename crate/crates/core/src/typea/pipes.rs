use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::weight::{Atom, WeightExpr, PQ};
use super::wiring::{identity_perm, inverse_perm, lmul_s, perm_length, compose, Perm, SubWiring};
use crate::error::{Error, Result};
use crate::theta::{LatticeVector, LinearMap, SymbolTable, ThetaExpr};

/// Largest grid size enumerated by default.
pub const MAX_GRID: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tile {
    X,
    B,
    H,
    J,
    I,
    F,
    O,
}

impl Tile {
    pub fn from_letter(c: char) -> Result<Tile> {
        Ok(match c {
            'X' => Tile::X,
            'B' => Tile::B,
            'H' => Tile::H,
            'J' => Tile::J,
            'I' => Tile::I,
            'F' => Tile::F,
            'O' => Tile::O,
            _ => return Err(Error::Parse(format!("unknown tile {c}"))),
        })
    }

    pub fn letter(self) -> char {
        match self {
            Tile::X => 'X',
            Tile::B => 'B',
            Tile::H => 'H',
            Tile::J => 'J',
            Tile::I => 'I',
            Tile::F => 'F',
            Tile::O => 'O',
        }
    }

    /// Tiles whose crossing is kept in the subword.
    pub fn is_crossing(self) -> bool {
        matches!(self, Tile::X | Tile::H | Tile::I)
    }

    fn uses_left(self) -> bool {
        matches!(self, Tile::X | Tile::B | Tile::H | Tile::J)
    }

    fn uses_bottom(self) -> bool {
        matches!(self, Tile::X | Tile::B | Tile::I | Tile::F)
    }

    fn uses_top(self) -> bool {
        matches!(self, Tile::X | Tile::B | Tile::J | Tile::I)
    }

    fn uses_right(self) -> bool {
        matches!(self, Tile::X | Tile::B | Tile::H | Tile::F)
    }

    /// Exit side for a pipe entering from the left (`true`) or the bottom.
    fn exit(self, from_left: bool) -> Option<Side> {
        match (self, from_left) {
            (Tile::X, true) | (Tile::H, true) | (Tile::B, false) | (Tile::F, false) => Some(Side::Right),
            (Tile::X, false) | (Tile::I, false) | (Tile::B, true) | (Tile::J, true) => Some(Side::Top),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Right,
    Top,
}

/// Reduced word of `u₀ ∈ S_{2n}` (`u₀(i) = n+i`) and its cell map.
#[derive(Clone, Debug, Serialize)]
pub struct U0Data {
    pub n: usize,
    pub word: Vec<usize>,
    /// Grid cell `(i, j)` (1-based) of each word position.
    pub cells: Vec<(usize, usize)>,
    /// Word position (0-based) of each cell, indexed `[i-1][j-1]`.
    pub positions: Vec<Vec<usize>>,
}

/// `(s_n ⋯ s_{2n-1})(s_{n-1} ⋯ s_{2n-2}) ⋯ (s_1 ⋯ s_n)`.
pub fn u0_data(n: usize) -> Result<U0Data> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    let mut word = Vec::with_capacity(n * n);
    for k in (1..=n).rev() {
        word.extend(k..k + n);
    }
    let mut prefix = identity_perm(2 * n);
    let mut cells = Vec::with_capacity(word.len());
    let mut positions = vec![vec![usize::MAX; n]; n];
    for (pos, &i) in word.iter().enumerate() {
        let (a, b) = (prefix[i - 1], prefix[i]);
        assert!(a <= n && b > n, "u0 word crosses red strings {a} and {b}");
        let (ci, cj) = (b - n, a);
        assert_eq!(positions[ci - 1][cj - 1], usize::MAX, "cell ({ci},{cj}) visited twice");
        positions[ci - 1][cj - 1] = pos;
        cells.push((ci, cj));
        prefix.swap(i - 1, i);
    }
    Ok(U0Data { n, word, cells, positions })
}

/// Symbols `x1..xn, y1..yn, l1..ln, hbar` of the polynomial representatives.
pub fn poly_symbols(n: usize) -> Arc<SymbolTable> {
    let mut z: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    z.extend((1..=n).map(|i| format!("y{i}")));
    let l: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
    SymbolTable::new(&z, &l)
}

/// From the numbered `S_{2n}` symbols to [`poly_symbols`]: `z_j ↦ y_j`, `z_{n+i} ↦ x_i`,
/// `λ_j ↦ λ_j` and `λ_{n+i} ↦ (i-1)ħ`.
pub fn wiring_to_poly(n: usize) -> LinearMap {
    let t = poly_symbols(n);
    let m = 2 * n;
    let h = t.hbar_vector();
    let mut images = Vec::with_capacity(2 * m + 1);
    for k in 1..=m {
        let name = if k <= n { format!("y{k}") } else { format!("x{}", k - n) };
        images.push(t.basis(t.index_of(&name).expect("symbol")));
    }
    for k in 1..=m {
        images.push(if k <= n { t.basis(t.index_of(&format!("l{k}")).expect("symbol")) } else { h.scale((k - n - 1) as i32) });
    }
    images.push(h);
    LinearMap::new(images, t.len())
}

/// Does `σ` lie in `W^P` for `Σ_P = {n+1, …, 2n-1}`?
fn is_min_rep(sigma: &Perm, n: usize) -> bool {
    (n..2 * n - 1).all(|k| sigma[k] < sigma[k + 1])
}

/// Subsets `J` of the `u₀` word with `w(J) = w × id` whose suffix products all
/// lie in `W^P`. This is the oracle for the grid enumeration.
pub fn filtered_subwords(n: usize, w: &Perm) -> Result<Vec<SubWiring>> {
    check_size(n, w)?;
    let u0 = u0_data(n)?;
    let mut target = w.clone();
    target.extend(n + 1..=2 * n);
    let l = u0.word.len();
    let mut out = Vec::new();
    let mut subset = vec![false; l];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        word: &[usize],
        n: usize,
        target: &Perm,
        k: usize,
        suffix: Perm,
        subset: &mut Vec<bool>,
        out: &mut Vec<SubWiring>,
    ) {
        let need = compose(target, &inverse_perm(&suffix));
        if perm_length(&need) > k {
            return;
        }
        if k == 0 {
            out.push(SubWiring { m: 2 * n, word: word.to_vec(), subset: subset.clone() });
            return;
        }
        let j = k - 1;
        for take in [false, true] {
            let x = if take { lmul_s(word[j], &suffix) } else { suffix.clone() };
            if !is_min_rep(&x, n) {
                continue;
            }
            subset[j] = take;
            rec(word, n, target, j, x, subset, out);
        }
        subset[j] = false;
    }
    rec(&u0.word, n, &target, l, identity_perm(2 * n), &mut subset, &mut out);
    Ok(out)
}

fn check_size(n: usize, w: &Perm) -> Result<()> {
    if n > MAX_GRID {
        return Err(Error::BoundExceeded(format!("grid size {n} exceeds {MAX_GRID}")));
    }
    if w.len() != n {
        return Err(Error::InvalidPermutation(format!("{w:?} is not in S_{n}")));
    }
    Ok(())
}

/// Pipes through each tile: the pipe entering from the left and from the bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub left: Vec<Vec<Option<usize>>>,
    pub bottom: Vec<Vec<Option<usize>>>,
    /// `exits[p-1]` is the top column of pipe `p`.
    pub exits: Perm,
    /// Walking levels of single-pipe tiles.
    pub levels: Vec<Vec<Option<i32>>>,
}

/// Tiling of the `n × n` grid with pipes entering on the left and leaving on top.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenericPipeDream {
    pub n: usize,
    pub tiles: Vec<Vec<Tile>>,
    pub levels: Vec<Vec<Option<i32>>>,
}

#[derive(Serialize, Deserialize)]
struct PipeDreamJson {
    n: usize,
    permutation: Vec<usize>,
    tiles: Vec<String>,
    levels: Vec<Vec<Option<i32>>>,
}

/// Follows every pipe from the left boundary, recording levels by the walking rule.
///
/// The counter `k` is the number of trivial strings passed into the region above
/// and left of the pipe. `H` records `k` then raises it, `J` records `k`, `I` lowers
/// it then records, and `F` records `k - 1`.
pub fn trace(n: usize, tiles: &[Vec<Tile>]) -> Result<Trace> {
    if tiles.len() != n || tiles.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument(format!("tiling is not {n}×{n}")));
    }
    let mut left = vec![vec![None; n]; n];
    let mut bottom = vec![vec![None; n]; n];
    let mut levels = vec![vec![None; n]; n];
    let mut exits = vec![0; n];
    for p in 1..=n {
        let (mut r, mut c, mut from_left) = (p - 1, 0usize, true);
        let mut level = 0i32;
        loop {
            let t = tiles[r][c];
            let slot = if from_left { &mut left[r][c] } else { &mut bottom[r][c] };
            if slot.is_some() {
                return Err(Error::InvalidArgument(format!("two pipes enter tile ({},{})", r + 1, c + 1)));
            }
            *slot = Some(p);
            match t {
                Tile::H => {
                    levels[r][c] = Some(level);
                    level += 1;
                }
                Tile::I => {
                    level -= 1;
                    levels[r][c] = Some(level);
                }
                Tile::J => levels[r][c] = Some(level),
                Tile::F => levels[r][c] = Some(level - 1),
                _ => {}
            }
            match t.exit(from_left) {
                None => {
                    return Err(Error::InvalidArgument(format!("pipe {p} cannot enter tile {:?} at ({},{})", t, r + 1, c + 1)))
                }
                Some(Side::Right) => {
                    if c + 1 == n {
                        return Err(Error::InvalidArgument(format!("pipe {p} leaves through the right boundary")));
                    }
                    c += 1;
                    from_left = true;
                }
                Some(Side::Top) => {
                    if r == 0 {
                        exits[p - 1] = c + 1;
                        break;
                    }
                    r -= 1;
                    from_left = false;
                }
            }
        }
    }
    for r in 0..n {
        for c in 0..n {
            let t = tiles[r][c];
            if t.uses_left() != left[r][c].is_some() || t.uses_bottom() != bottom[r][c].is_some() {
                return Err(Error::InvalidArgument(format!("tile ({},{}) is not fed consistently", r + 1, c + 1)));
            }
        }
    }
    Ok(Trace { left, bottom, exits, levels })
}

impl GenericPipeDream {
    pub fn from_tiles(n: usize, tiles: Vec<Vec<Tile>>) -> Result<Self> {
        let t = trace(n, &tiles)?;
        let pd = GenericPipeDream { n, tiles, levels: t.levels };
        pd.check_levels()?;
        Ok(pd)
    }

    fn check_levels(&self) -> Result<()> {
        let bad = self.levels.iter().flatten().flatten().find(|&&l| l < 0 || l >= self.n as i32);
        match bad {
            Some(l) => Err(Error::InconsistentLevels(format!("level {l} outside 0..{}", self.n))),
            None => Ok(()),
        }
    }

    /// Parses rows of tile letters such as `["BXJ", "JIO", "HJO"]`.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let tiles: Vec<Vec<Tile>> =
            rows.iter().map(|r| r.chars().filter(|c| !c.is_whitespace()).map(Tile::from_letter).collect()).collect::<Result<_>>()?;
        Self::from_tiles(rows.len(), tiles)
    }

    pub fn trace(&self) -> Trace {
        trace(self.n, &self.tiles).expect("validated at construction")
    }

    /// `w` with pipe `p` leaving at top column `w(p)`.
    pub fn permutation(&self) -> Perm {
        self.trace().exits
    }

    /// The subset of the `u₀` word given by the crossing tiles.
    pub fn subset(&self, u0: &U0Data) -> Vec<bool> {
        u0.cells.iter().map(|&(i, j)| self.tiles[i - 1][j - 1].is_crossing()).collect()
    }

    /// The pipe dream of a filtered sub-wiring diagram of `u₀`.
    ///
    /// Tiles and levels are read off the blue labels `γ̌ = ε_c - ε_d`: labels up to `n`
    /// are pipes, label `n+1+ℓ` is the trivial string at level `ℓ`. The result is
    /// checked against [`trace`]; any disagreement is an `InconsistentLevels` error.
    pub fn from_subwiring(u0: &U0Data, sw: &SubWiring) -> Result<Self> {
        let n = u0.n;
        if sw.word != u0.word {
            return Err(Error::InvalidArgument("sub-wiring diagram is not over the u0 word".into()));
        }
        let mut tiles = vec![vec![Tile::O; n]; n];
        let mut want_levels = vec![vec![None; n]; n];
        let mut want_pipes = vec![vec![(None, None); n]; n];
        for (pos, cr) in sw.crossings().into_iter().enumerate() {
            let (i, j) = u0.cells[pos];
            let (cp, dp) = (cr.c <= n, cr.d <= n);
            let lvl = |x: usize| (x - n - 1) as i32;
            let (t, lv, pipes) = match (cp, dp, cr.kept) {
                (true, true, true) => (Tile::X, None, (Some(cr.c), Some(cr.d))),
                (true, true, false) => (Tile::B, None, (Some(cr.c), Some(cr.d))),
                (true, false, true) => (Tile::H, Some(lvl(cr.d)), (Some(cr.c), None)),
                (true, false, false) => (Tile::J, Some(lvl(cr.d)), (Some(cr.c), None)),
                (false, true, true) => (Tile::I, Some(lvl(cr.c)), (None, Some(cr.d))),
                (false, true, false) => (Tile::F, Some(lvl(cr.c)), (None, Some(cr.d))),
                (false, false, false) if cr.d == cr.c + 1 => (Tile::O, None, (None, None)),
                _ => {
                    return Err(Error::InconsistentLevels(format!(
                        "trivial strings {} and {} meet at ({i},{j})",
                        cr.c, cr.d
                    )))
                }
            };
            tiles[i - 1][j - 1] = t;
            want_levels[i - 1][j - 1] = lv;
            want_pipes[i - 1][j - 1] = pipes;
        }
        let tr = trace(n, &tiles).map_err(|e| Error::InconsistentLevels(e.to_string()))?;
        for r in 0..n {
            for c in 0..n {
                if tr.levels[r][c] != want_levels[r][c] {
                    return Err(Error::InconsistentLevels(format!(
                        "tile ({},{}): walking gives {:?}, wiring gives {:?}",
                        r + 1,
                        c + 1,
                        tr.levels[r][c],
                        want_levels[r][c]
                    )));
                }
                if (tr.left[r][c], tr.bottom[r][c]) != want_pipes[r][c] {
                    return Err(Error::InconsistentLevels(format!("tile ({},{}): pipes disagree", r + 1, c + 1)));
                }
            }
        }
        let mut w = sw.permutation();
        w.truncate(n);
        if tr.exits != w {
            return Err(Error::InconsistentLevels(format!("exits {:?} but wiring permutation {:?}", tr.exits, w)));
        }
        let pd = GenericPipeDream { n, tiles, levels: tr.levels };
        pd.check_levels()?;
        Ok(pd)
    }

    /// Weight of every cell, `None` for an empty tile; the second argument at
    /// cell `(i, j)` is `y_j - x_i`.
    pub fn cell_weights(&self) -> Vec<Vec<Option<Atom>>> {
        let n = self.n;
        let t = poly_symbols(n);
        let sym = |s: String| t.basis(t.index_of(&s).expect("symbol"));
        let h = t.hbar_vector();
        let tr = self.trace();
        let mut out = vec![vec![None; n]; n];
        for r in 0..n {
            for c in 0..n {
                let y = sym(format!("y{}", c + 1)).sub(&sym(format!("x{}", r + 1)));
                let lam = |p: Option<usize>| sym(format!("l{}", p.expect("pipe")));
                let lv = || h.scale(self.levels[r][c].expect("level"));
                let (f, x): (PQ, LatticeVector) = match self.tiles[r][c] {
                    Tile::O => continue,
                    Tile::X => (PQ::Q, lam(tr.left[r][c]).sub(&lam(tr.bottom[r][c]))),
                    Tile::B => (PQ::P, lam(tr.left[r][c]).sub(&lam(tr.bottom[r][c]))),
                    Tile::H => (PQ::Q, lam(tr.left[r][c]).sub(&lv())),
                    Tile::J => (PQ::P, lam(tr.left[r][c]).sub(&lv())),
                    Tile::I => (PQ::Q, lv().sub(&lam(tr.bottom[r][c]))),
                    Tile::F => (PQ::P, lv().sub(&lam(tr.bottom[r][c]))),
                };
                out[r][c] = Some(Atom { f, x, y });
            }
        }
        out
    }

    /// Product of the tile weights.
    pub fn weight(&self) -> WeightExpr {
        let atoms = self.cell_weights().into_iter().flatten().flatten().collect();
        WeightExpr::product(&poly_symbols(self.n), atoms)
    }

    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        for r in 0..self.n {
            let cells: Vec<String> = (0..self.n)
                .map(|c| match self.levels[r][c] {
                    Some(l) => format!("{}{l}", self.tiles[r][c].letter()),
                    None => format!("{} ", self.tiles[r][c].letter()),
                })
                .collect();
            s.push_str(cells.join(" ").trim_end());
            s.push('\n');
        }
        s
    }

    /// The tile array in `\BPD` macro form.
    pub fn to_latex(&self) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|r| {
                let mut row = format!("\\M{{{}}}", r + 1);
                for c in 0..self.n {
                    row.push('\\');
                    row.push(self.tiles[r][c].letter());
                    if let Some(l) = self.levels[r][c] {
                        row.push_str(&format!("[{l}]"));
                    }
                }
                row
            })
            .collect();
        format!("\\BPD{{{}}}", rows.join("\\\\"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = PipeDreamJson {
            n: self.n,
            permutation: self.permutation(),
            tiles: self.tiles.iter().map(|r| r.iter().map(|t| t.letter()).collect()).collect(),
            levels: self.levels.clone(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: PipeDreamJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let rows: Vec<&str> = doc.tiles.iter().map(|s| s.as_str()).collect();
        let pd = Self::parse_rows(&rows)?;
        if pd.n != doc.n || pd.levels != doc.levels || pd.permutation() != doc.permutation {
            return Err(Error::Parse("pipe dream fields are inconsistent".into()));
        }
        Ok(pd)
    }
}

impl fmt::Display for GenericPipeDream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

/// All pipe dreams with exit permutation `w`, by a row-major search over tiles
/// constrained by the already placed left and top neighbours.
pub fn enumerate_grid(n: usize, w: &Perm) -> Result<Vec<GenericPipeDream>> {
    check_size(n, w)?;
    let mut out = Vec::new();
    let mut tiles = vec![vec![Tile::O; n]; n];
    fn rec(n: usize, w: &Perm, k: usize, tiles: &mut Vec<Vec<Tile>>, out: &mut Vec<GenericPipeDream>) {
        let (r, c) = (k / n, k % n);
        if c == 0 && r > 0 {
            // pipes below row r are exactly those entering rows r+1..n
            let down = tiles[r - 1].iter().filter(|t| t.uses_bottom()).count();
            if down != n - r {
                return;
            }
        }
        if k == n * n {
            if tiles[n - 1].iter().any(|t| t.uses_bottom()) {
                return;
            }
            if let Ok(pd) = GenericPipeDream::from_tiles(n, tiles.clone()) {
                if &pd.permutation() == w {
                    out.push(pd);
                }
            }
            return;
        }
        let left = c == 0 || tiles[r][c - 1].uses_right();
        let top = if r == 0 { None } else { Some(tiles[r - 1][c].uses_bottom()) };
        for t in [Tile::X, Tile::B, Tile::H, Tile::J, Tile::I, Tile::F, Tile::O] {
            if t.uses_left() != left || top.is_some_and(|tp| t.uses_top() != tp) {
                continue;
            }
            if c == n - 1 && t.uses_right() {
                continue;
            }
            tiles[r][c] = t;
            rec(n, w, k + 1, tiles, out);
        }
        tiles[r][c] = Tile::O;
    }
    rec(n, w, 0, &mut tiles, &mut out);
    Ok(out)
}

/// The same set computed from [`filtered_subwords`].
pub fn enumerate_subwords(n: usize, w: &Perm) -> Result<Vec<GenericPipeDream>> {
    let u0 = u0_data(n)?;
    filtered_subwords(n, w)?.iter().map(|sw| GenericPipeDream::from_subwiring(&u0, sw)).collect()
}

/// Weight of a sub-wiring diagram of `u₀` in the polynomial alphabet.
pub fn subwiring_poly_weight(n: usize, sw: &SubWiring) -> Result<ThetaExpr> {
    let t = SymbolTable::numbered(2 * n, 2 * n);
    sw.weight(&t)?.map(&wiring_to_poly(n))
}
