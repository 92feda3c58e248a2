//! Backtracking enumeration of T-tetromino tilings.
//!
//! The search always branches on the lowest uncovered cell in row-major
//! order and tries orientations 1..=4, so every tiling is produced exactly
//! once and in a fixed order.

use num::BigUint;
use rayon::prelude::*;

use crate::lattice::{Cell, DomainSpec, Orientation, Tile, Tiling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pruning {
    /// Reject placements that break the colouring constraints immediately.
    #[default]
    On,
    /// Only enforce exact cover.
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Emit {
    CountOnly,
    #[default]
    FullTilings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EnumerationConfig {
    pub pruning: Pruning,
    pub limit: Option<std::num::NonZeroU64>,
    pub emit: Emit,
}

pub fn is_tileable(width: usize, height: usize) -> bool {
    width > 0 && height > 0 && width % 4 == 0 && height % 4 == 0
}

/// One candidate placement: its cells as board indices, plus the tile when
/// the board is a coloured domain.
#[derive(Debug, Clone)]
struct Placement {
    cells: [usize; 4],
    tile: Option<Tile>,
}

/// Per-cell table of the placements whose row-major first cell is that cell,
/// in orientation order.
#[derive(Debug, Clone)]
struct Board {
    width: usize,
    height: usize,
    options: Vec<Vec<Placement>>,
}

impl Board {
    fn for_domain(d: &DomainSpec, pruning: Pruning) -> Self {
        Self::build(d.width(), d.height(), |o, anchor| {
            let tile = match pruning {
                Pruning::On => Tile::new(o, anchor, d).ok()?,
                Pruning::Off => Tile::placement(o, anchor, d).ok()?,
            };
            Some(Some(tile))
        })
    }

    fn raw(width: usize, height: usize) -> Self {
        Self::build(width, height, |_, _| Some(None))
    }

    fn build(
        width: usize,
        height: usize,
        mut make: impl FnMut(Orientation, Cell) -> Option<Option<Tile>>,
    ) -> Self {
        let mut options = vec![Vec::new(); width * height];
        for j in 0..height {
            for i in 0..width {
                for o in Orientation::ALL {
                    let (fi, fj) = o.first_cell_offset();
                    let (w, h) = o.extent();
                    if i < fi || j < fj {
                        continue;
                    }
                    let anchor = Cell::new(i - fi, j - fj);
                    if anchor.i + w > width || anchor.j + h > height {
                        continue;
                    }
                    let Some(tile) = make(o, anchor) else { continue };
                    let cells = o
                        .cell_offsets()
                        .map(|(di, dj)| (anchor.j + dj) * width + anchor.i + di);
                    options[j * width + i].push(Placement { cells, tile });
                }
            }
        }
        Board { width, height, options }
    }

    fn size(&self) -> usize {
        self.width * self.height
    }

    fn fits(&self, filled: &[bool], p: &Placement) -> bool {
        p.cells.iter().all(|&c| !filled[c])
    }

    fn set(filled: &mut [bool], p: &Placement, value: bool) {
        for &c in &p.cells {
            filled[c] = value;
        }
    }

    fn next_empty(filled: &[bool], from: usize) -> Option<usize> {
        filled[from..].iter().position(|&f| !f).map(|k| k + from)
    }

    fn count_from(&self, filled: &mut [bool], from: usize) -> u64 {
        let Some(cell) = Self::next_empty(filled, from) else { return 1 };
        let mut total = 0;
        for p in &self.options[cell] {
            if self.fits(filled, p) {
                Self::set(filled, p, true);
                total += self.count_from(filled, cell + 1);
                Self::set(filled, p, false);
            }
        }
        total
    }

    /// Partial fillings after `depth` placements, in search order, for
    /// parallel counting.
    fn frontier(&self, depth: usize) -> Vec<(Vec<bool>, usize)> {
        let mut layer = vec![(vec![false; self.size()], 0usize)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (filled, from) in layer {
                let Some(cell) = Self::next_empty(&filled, from) else {
                    next.push((filled, from));
                    continue;
                };
                for p in &self.options[cell] {
                    if self.fits(&filled, p) {
                        let mut child = filled.clone();
                        Self::set(&mut child, p, true);
                        next.push((child, cell + 1));
                    }
                }
            }
            layer = next;
        }
        layer
    }

    fn count(&self) -> u64 {
        if self.size() == 0 {
            return 0;
        }
        let frontier = self.frontier(6);
        frontier
            .into_par_iter()
            .map(|(mut filled, from)| self.count_from(&mut filled, from))
            .sum()
    }
}

/// Lazy stream of tilings in canonical search order.
pub struct Tilings {
    domain: DomainSpec,
    board: Board,
    filled: Vec<bool>,
    /// `(cell, index of the placement in use)`
    stack: Vec<(usize, usize)>,
    started: bool,
    remaining: Option<u64>,
}

impl Tilings {
    fn new(domain: DomainSpec, cfg: &EnumerationConfig) -> Self {
        let board = Board::for_domain(&domain, cfg.pruning);
        let filled = vec![false; board.size()];
        Tilings {
            domain,
            board,
            filled,
            stack: Vec::new(),
            started: false,
            remaining: cfg.limit.map(|l| l.get()),
        }
    }

    /// Tries placements at `cell` starting from option index `start`.
    fn place_from(&mut self, cell: usize, start: usize) -> bool {
        let options = &self.board.options[cell];
        for k in start..options.len() {
            if self.board.fits(&self.filled, &options[k]) {
                Board::set(&mut self.filled, &options[k], true);
                self.stack.push((cell, k));
                return true;
            }
        }
        false
    }

    fn current(&self) -> Tiling {
        let tiles = self
            .stack
            .iter()
            .map(|&(cell, k)| self.board.options[cell][k].tile.expect("domain board"))
            .collect();
        Tiling::new(self.domain, tiles)
    }

    /// Advances to the next complete filling; false when exhausted.
    fn advance(&mut self) -> bool {
        // resume: either start fresh or backtrack from the last emitted leaf
        let mut descend = if !self.started {
            self.started = true;
            Some(0)
        } else {
            None
        };
        loop {
            if let Some(from) = descend.take() {
                match Board::next_empty(&self.filled, from) {
                    None => return true,
                    Some(cell) => {
                        if self.place_from(cell, 0) {
                            descend = Some(cell + 1);
                        }
                        continue;
                    }
                }
            }
            let Some((cell, k)) = self.stack.pop() else { return false };
            Board::set(&mut self.filled, &self.board.options[cell][k], false);
            if self.place_from(cell, k + 1) {
                descend = Some(cell + 1);
            }
        }
    }
}

impl Iterator for Tilings {
    type Item = Tiling;

    fn next(&mut self) -> Option<Tiling> {
        if self.remaining == Some(0) {
            return None;
        }
        if !self.advance() {
            self.remaining = Some(0);
            return None;
        }
        if let Some(r) = self.remaining.as_mut() {
            *r -= 1;
        }
        Some(self.current())
    }
}

pub fn enumerate_tilings(d: &DomainSpec, cfg: &EnumerationConfig) -> Tilings {
    Tilings::new(*d, cfg)
}

pub fn count_tilings(d: &DomainSpec) -> BigUint {
    count_tilings_with(d, Pruning::On)
}

pub fn count_tilings_with(d: &DomainSpec, pruning: Pruning) -> BigUint {
    BigUint::from(Board::for_domain(d, pruning).count())
}

/// Counts exact covers of an arbitrary `width × height` rectangle by
/// T-tetrominoes, with no colouring constraints.
pub fn count_rectangle(width: usize, height: usize) -> BigUint {
    BigUint::from(Board::raw(width, height).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_tiling;

    fn d(m: usize, n: usize) -> DomainSpec {
        DomainSpec::new(m, n).unwrap()
    }

    #[test]
    fn tileability() {
        assert!(is_tileable(16, 12));
        assert!(!is_tileable(4, 6));
        assert!(is_tileable(8, 8));
        assert!(!is_tileable(0, 8));
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_tilings(&d(1, 1)), BigUint::from(2u32));
        assert_eq!(count_tilings(&d(1, 2)), BigUint::from(6u32));
        assert_eq!(count_tilings(&d(2, 1)), BigUint::from(6u32));
        assert_eq!(count_tilings(&d(2, 2)), BigUint::from(84u32));
    }

    #[test]
    fn raw_rectangles() {
        assert_eq!(count_rectangle(4, 4), BigUint::from(2u32));
        assert_eq!(count_rectangle(4, 6), BigUint::from(0u32));
        assert_eq!(count_rectangle(2, 8), BigUint::from(0u32));
        assert_eq!(count_rectangle(0, 8), BigUint::from(0u32));
    }

    #[test]
    fn stream_matches_count_and_validates() {
        for (m, n) in [(1, 1), (1, 2), (2, 2)] {
            let dom = d(m, n);
            let all: Vec<_> = enumerate_tilings(&dom, &EnumerationConfig::default()).collect();
            assert_eq!(BigUint::from(all.len()), count_tilings(&dom));
            for t in &all {
                assert!(validate_tiling(t).is_valid());
            }
        }
    }

    #[test]
    fn limit_truncates() {
        let cfg = EnumerationConfig { limit: std::num::NonZeroU64::new(5), ..Default::default() };
        assert_eq!(enumerate_tilings(&d(2, 2), &cfg).count(), 5);
    }

    #[test]
    fn pruning_is_transparent() {
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let dom = d(m, n);
            let on: Vec<_> = enumerate_tilings(&dom, &EnumerationConfig::default())
                .map(|t| t.to_record())
                .collect();
            let off_cfg = EnumerationConfig { pruning: Pruning::Off, ..Default::default() };
            let off: Vec<_> = enumerate_tilings(&dom, &off_cfg).map(|t| t.to_record()).collect();
            assert_eq!(on, off, "{m}x{n}");
        }
    }
}
