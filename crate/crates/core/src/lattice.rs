//! Coordinates, vertex colouring and T-tetromino geometry on a `4m × 4n`
//! rectangle.
//!
//! Cells are indexed `(i, j)` with `0 ≤ i < 4m`, `0 ≤ j < 4n`; lattice vertices
//! `(x, y)` sit at cell corners with `0 ≤ x ≤ 4m`, `0 ≤ y ≤ 4n`. A vertex with
//! both coordinates even is black when `x + y ≡ 0 (mod 4)` and white when
//! `x + y ≡ 2 (mod 4)`; it belongs to the odd sublattice when `y ≡ 0 (mod 4)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DomainSpec {
    m: usize,
    n: usize,
}

impl DomainSpec {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Range(format!("domain needs m, n >= 1, got m={m}, n={n}")));
        }
        Ok(DomainSpec { m, n })
    }

    /// Domain for a `width × height` rectangle, if both are multiples of 4.
    pub fn from_dimensions(width: usize, height: usize) -> Option<Self> {
        if super::enumerate::is_tileable(width, height) {
            Some(DomainSpec { m: width / 4, n: height / 4 })
        } else {
            None
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        4 * self.m
    }

    pub fn height(&self) -> usize {
        4 * self.n
    }

    pub fn cell_count(&self) -> usize {
        self.width() * self.height()
    }

    /// Number of tiles in any tiling.
    pub fn tile_count(&self) -> usize {
        4 * self.m * self.n
    }

    pub fn cell_index(&self, c: Cell) -> usize {
        c.j * self.width() + c.i
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v.x <= self.width() && v.y <= self.height()
    }

    pub fn on_boundary(&self, v: Vertex) -> bool {
        v.x == 0 || v.y == 0 || v.x == self.width() || v.y == self.height()
    }

    pub fn classify(&self, v: Vertex) -> Result<VertexClass> {
        classify_vertex(v.x as i64, v.y as i64, self)
    }

    /// All white vertices strictly inside the domain, row-major.
    pub fn interior_white_vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        for y in 1..self.height() {
            for x in 1..self.width() {
                let v = Vertex::new(x, y);
                if self.classify(v).map(|c| c.is_white()).unwrap_or(false) {
                    out.push(v);
                }
            }
        }
        out
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width(), self.height())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub x: usize,
    pub y: usize,
}

impl Vertex {
    pub const fn new(x: usize, y: usize) -> Self {
        Vertex { x, y }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
}

impl Cell {
    pub const fn new(i: usize, j: usize) -> Self {
        Cell { i, j }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    BlackOdd,
    BlackEven,
    WhiteOdd,
    WhiteEven,
    Plain,
}

impl VertexClass {
    pub fn is_white(self) -> bool {
        matches!(self, VertexClass::WhiteOdd | VertexClass::WhiteEven)
    }

    pub fn is_black(self) -> bool {
        matches!(self, VertexClass::BlackOdd | VertexClass::BlackEven)
    }
}

pub fn classify_vertex(x: i64, y: i64, d: &DomainSpec) -> Result<VertexClass> {
    if x < 0 || y < 0 || x > d.width() as i64 || y > d.height() as i64 {
        return Err(Error::Range(format!("vertex ({x},{y}) outside {d}")));
    }
    if x % 2 != 0 || y % 2 != 0 {
        return Ok(VertexClass::Plain);
    }
    let odd = y % 4 == 0;
    Ok(match ((x + y) % 4 == 0, odd) {
        (true, true) => VertexClass::BlackOdd,
        (true, false) => VertexClass::BlackEven,
        (false, true) => VertexClass::WhiteOdd,
        (false, false) => VertexClass::WhiteEven,
    })
}

/// Stem direction of a T-tetromino. Up and Down have a horizontal long side,
/// Right and Left a vertical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Up = 1,
    Right = 2,
    Down = 3,
    Left = 4,
}

impl Orientation {
    pub const ALL: [Orientation; 4] =
        [Orientation::Up, Orientation::Right, Orientation::Down, Orientation::Left];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(o: u8) -> Result<Self> {
        match o {
            1 => Ok(Orientation::Up),
            2 => Ok(Orientation::Right),
            3 => Ok(Orientation::Down),
            4 => Ok(Orientation::Left),
            _ => Err(Error::Range(format!("orientation must be 1..=4, got {o}"))),
        }
    }

    pub fn long_side_horizontal(self) -> bool {
        matches!(self, Orientation::Up | Orientation::Down)
    }

    /// Covered cells relative to the anchor (lower-left of the bounding box).
    pub fn cell_offsets(self) -> [(usize, usize); 4] {
        match self {
            Orientation::Up => [(0, 0), (1, 0), (2, 0), (1, 1)],
            Orientation::Right => [(0, 0), (0, 1), (0, 2), (1, 1)],
            Orientation::Down => [(1, 0), (0, 1), (1, 1), (2, 1)],
            Orientation::Left => [(1, 0), (1, 1), (1, 2), (0, 1)],
        }
    }

    /// Bounding box `(width, height)` in cells.
    pub fn extent(self) -> (usize, usize) {
        if self.long_side_horizontal() {
            (3, 2)
        } else {
            (2, 3)
        }
    }

    /// The two cornerless vertices on the long side, relative to the anchor,
    /// ordered by walking the long side with the stem on the left.
    pub fn cornerless_offsets(self) -> [(usize, usize); 2] {
        match self {
            Orientation::Up => [(1, 0), (2, 0)],
            Orientation::Right => [(0, 2), (0, 1)],
            Orientation::Down => [(2, 2), (1, 2)],
            Orientation::Left => [(2, 1), (2, 2)],
        }
    }

    /// Offset of the row-major first cell relative to the anchor.
    pub(crate) fn first_cell_offset(self) -> (usize, usize) {
        match self {
            Orientation::Up | Orientation::Right => (0, 0),
            Orientation::Down | Orientation::Left => (1, 0),
        }
    }
}

/// Position of the white vertex among a tile's two cornerless vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BType {
    First = 1,
    Second = 2,
}

/// A placed T-tetromino.
///
/// `white` and `b_type` are `None` only for raw placements that violate the
/// colouring constraints; [`Tile::new`] never produces those.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tile {
    orientation: Orientation,
    anchor: Cell,
    white: Option<Vertex>,
    b_type: Option<BType>,
}

impl Tile {
    /// Places a tile and checks it against the colouring: exactly one
    /// cornerless vertex is white, the other is not black, and no corner is
    /// white.
    pub fn new(orientation: Orientation, anchor: Cell, d: &DomainSpec) -> Result<Self> {
        let tile = Tile::placement(orientation, anchor, d)?;
        let problems = tile.placement_problems(d);
        if problems.is_empty() {
            Ok(tile)
        } else {
            Err(Error::Placement(format!(
                "orientation {} at {anchor}: {}",
                orientation.number(),
                problems.join("; ")
            )))
        }
    }

    /// Places a tile with only a bounds check.
    pub fn placement(orientation: Orientation, anchor: Cell, d: &DomainSpec) -> Result<Self> {
        let (w, h) = orientation.extent();
        if anchor.i + w > d.width() || anchor.j + h > d.height() {
            return Err(Error::Range(format!(
                "orientation {} at {anchor} does not fit in {d}",
                orientation.number()
            )));
        }
        let mut white = None;
        let mut b_type = None;
        let mut whites = 0;
        for (k, v) in tile_cornerless(orientation, anchor).into_iter().enumerate() {
            if d.classify(v)?.is_white() {
                whites += 1;
                white = Some(v);
                b_type = Some(if k == 0 { BType::First } else { BType::Second });
            }
        }
        if whites != 1 {
            white = None;
            b_type = None;
        }
        Ok(Tile { orientation, anchor, white, b_type })
    }

    fn placement_problems(&self, d: &DomainSpec) -> Vec<String> {
        let mut problems = Vec::new();
        let mut whites = 0;
        for v in self.cornerless() {
            match d.classify(v) {
                Ok(c) if c.is_white() => whites += 1,
                Ok(c) if c.is_black() => problems.push(format!("black vertex {v} is not a corner")),
                _ => {}
            }
        }
        if whites != 1 {
            problems.push(format!("{whites} white cornerless vertices"));
        }
        for v in self.corners() {
            if d.classify(v).map(|c| c.is_white()).unwrap_or(false) {
                problems.push(format!("corner on white vertex {v}"));
            }
        }
        problems
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn anchor(&self) -> Cell {
        self.anchor
    }

    pub fn white(&self) -> Option<Vertex> {
        self.white
    }

    pub fn b_type(&self) -> Option<BType> {
        self.b_type
    }

    pub fn cells(&self) -> [Cell; 4] {
        self.orientation
            .cell_offsets()
            .map(|(di, dj)| Cell::new(self.anchor.i + di, self.anchor.j + dj))
    }

    pub fn cornerless(&self) -> [Vertex; 2] {
        tile_cornerless(self.orientation, self.anchor)
    }

    /// The eight corner vertices of the outline.
    pub fn corners(&self) -> Vec<Vertex> {
        self.boundary_vertices()
            .into_iter()
            .filter(|&(_, incident)| incident != 2)
            .map(|(v, _)| v)
            .collect()
    }

    /// The ten outline vertices with the number of tile cells touching each.
    /// A vertex touched by exactly two cells lies on a straight stretch.
    fn boundary_vertices(&self) -> Vec<(Vertex, usize)> {
        let cells = self.cells();
        let mut seen: BTreeMap<Vertex, usize> = BTreeMap::new();
        for c in cells {
            for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                *seen.entry(Vertex::new(c.i + dx, c.j + dy)).or_default() += 1;
            }
        }
        seen.into_iter().collect()
    }
}

fn tile_cornerless(o: Orientation, anchor: Cell) -> [Vertex; 2] {
    o.cornerless_offsets().map(|(dx, dy)| Vertex::new(anchor.i + dx, anchor.j + dy))
}

pub fn tile_from(o: Orientation, anchor: Cell, d: &DomainSpec) -> Result<Tile> {
    Tile::new(o, anchor, d)
}

/// A complete (or candidate) tiling of a domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiling {
    domain: DomainSpec,
    tiles: Vec<Tile>,
}

impl Tiling {
    pub fn new(domain: DomainSpec, tiles: Vec<Tile>) -> Self {
        Tiling { domain, tiles }
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    /// `(B₁, B₂)`; tiles without a b-type are not counted.
    pub fn b_counts(&self) -> (usize, usize) {
        self.tiles.iter().fold((0, 0), |(b1, b2), t| match t.b_type {
            Some(BType::First) => (b1 + 1, b2),
            Some(BType::Second) => (b1, b2 + 1),
            None => (b1, b2),
        })
    }

    /// Cell → index of the covering tile; `None` for uncovered cells. Double
    /// covers keep the first tile.
    pub fn cell_map(&self) -> Vec<Option<usize>> {
        let mut map = vec![None; self.domain.cell_count()];
        for (k, t) in self.tiles.iter().enumerate() {
            for c in t.cells() {
                let idx = self.domain.cell_index(c);
                if map[idx].is_none() {
                    map[idx] = Some(k);
                }
            }
        }
        map
    }

    /// Tiles sorted by `(anchor j, anchor i, orientation)`.
    pub fn canonical(&self) -> Tiling {
        let mut tiles = self.tiles.clone();
        tiles.sort_by_key(|t| (t.anchor.j, t.anchor.i, t.orientation));
        Tiling { domain: self.domain, tiles }
    }

    pub fn to_record(&self) -> TilingRecord {
        TilingRecord {
            m: self.domain.m,
            n: self.domain.n,
            tiles: self
                .canonical()
                .tiles
                .iter()
                .map(|t| TileRecord { o: t.orientation.number(), anchor: [t.anchor.i, t.anchor.j] })
                .collect(),
        }
    }

    /// Rebuilds a tiling from its JSON record. Placements are bounds-checked
    /// but not colour-checked, so invalid tilings can be loaded and validated.
    pub fn from_record(r: &TilingRecord) -> Result<Self> {
        let domain = DomainSpec::new(r.m, r.n)?;
        let tiles = r
            .tiles
            .iter()
            .map(|t| {
                Tile::placement(Orientation::from_number(t.o)?, Cell::new(t.anchor[0], t.anchor[1]), &domain)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Tiling { domain, tiles })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileRecord {
    pub o: u8,
    pub anchor: [usize; 2],
}

/// Wire form of a tiling: `{"m":_, "n":_, "tiles":[{"o":_, "anchor":[i,j]}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingRecord {
    pub m: usize,
    pub n: usize,
    pub tiles: Vec<TileRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Uncovered(Cell),
    DoubleCover(Cell),
    CornerOnWhite { tile: usize, vertex: Vertex },
    BlackNotCorner { tile: usize, vertex: Vertex },
    NoUniqueWhite { tile: usize },
    TileCount { expected: usize, found: usize },
    BTypeSum { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Uncovered(c) => write!(f, "cell {c} uncovered"),
            Violation::DoubleCover(c) => write!(f, "cell {c} covered more than once"),
            Violation::CornerOnWhite { tile, vertex } => {
                write!(f, "tile {tile} has a corner on white vertex {vertex}")
            }
            Violation::BlackNotCorner { tile, vertex } => {
                write!(f, "tile {tile} covers black vertex {vertex} with a non-corner")
            }
            Violation::NoUniqueWhite { tile } => {
                write!(f, "tile {tile} does not cover exactly one white vertex")
            }
            Violation::TileCount { expected, found } => {
                write!(f, "expected {expected} tiles, found {found}")
            }
            Violation::BTypeSum { expected, found } => write!(f, "B1 + B2 = {found}, expected {expected}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_tiling(t: &Tiling) -> ValidationReport {
    let d = t.domain;
    let mut violations = Vec::new();
    let mut cover = vec![0usize; d.cell_count()];
    for tile in &t.tiles {
        for c in tile.cells() {
            cover[d.cell_index(c)] += 1;
        }
    }
    for j in 0..d.height() {
        for i in 0..d.width() {
            let c = Cell::new(i, j);
            match cover[d.cell_index(c)] {
                0 => violations.push(Violation::Uncovered(c)),
                1 => {}
                _ => violations.push(Violation::DoubleCover(c)),
            }
        }
    }
    for (k, tile) in t.tiles.iter().enumerate() {
        for (v, incident) in tile.boundary_vertices() {
            let class = d.classify(v).unwrap_or(VertexClass::Plain);
            if incident != 2 && class.is_white() {
                violations.push(Violation::CornerOnWhite { tile: k, vertex: v });
            }
            if incident == 2 && class.is_black() {
                violations.push(Violation::BlackNotCorner { tile: k, vertex: v });
            }
        }
        if tile.white.is_none() {
            violations.push(Violation::NoUniqueWhite { tile: k });
        }
    }
    if t.tiles.len() != d.tile_count() {
        violations.push(Violation::TileCount { expected: d.tile_count(), found: t.tiles.len() });
    }
    let (b1, b2) = t.b_counts();
    if b1 + b2 != d.tile_count() {
        violations.push(Violation::BTypeSum { expected: d.tile_count(), found: b1 + b2 });
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: usize, n: usize) -> DomainSpec {
        DomainSpec::new(m, n).unwrap()
    }

    #[test]
    fn classify_examples() {
        let dom = d(1, 1);
        assert_eq!(classify_vertex(0, 0, &dom).unwrap(), VertexClass::BlackOdd);
        assert_eq!(classify_vertex(2, 2, &dom).unwrap(), VertexClass::BlackEven);
        assert_eq!(classify_vertex(4, 2, &dom).unwrap(), VertexClass::WhiteEven);
        assert_eq!(classify_vertex(2, 4, &dom).unwrap(), VertexClass::WhiteOdd);
        assert_eq!(classify_vertex(1, 0, &dom).unwrap(), VertexClass::Plain);
        assert!(matches!(classify_vertex(5, 0, &dom), Err(Error::Range(_))));
        assert!(matches!(classify_vertex(-1, 0, &dom), Err(Error::Range(_))));
    }

    #[test]
    fn boundary_conventions() {
        for (m, n) in [(1, 1), (2, 3), (4, 2)] {
            let dom = d(m, n);
            for y in 0..=dom.height() {
                for x in 0..=dom.width() {
                    let v = Vertex::new(x, y);
                    if !dom.on_boundary(v) {
                        continue;
                    }
                    match dom.classify(v).unwrap() {
                        VertexClass::BlackEven => panic!("boundary black {v} is even"),
                        VertexClass::WhiteOdd => assert!(y == 0 || y == dom.height(), "{v}"),
                        VertexClass::WhiteEven => assert!(x == 0 || x == dom.width(), "{v}"),
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn interior_white_counts() {
        for m in 1..=5 {
            for n in 1..=5 {
                let dom = d(m, n);
                let whites = dom.interior_white_vertices();
                let even = whites
                    .iter()
                    .filter(|&&v| dom.classify(v).unwrap() == VertexClass::WhiteEven)
                    .count();
                assert_eq!(even, (m - 1) * n);
                assert_eq!(whites.len() - even, m * (n - 1));
            }
        }
    }

    #[test]
    fn derived_corners_match_cornerless_table() {
        let dom = d(2, 2);
        for o in Orientation::ALL {
            let t = Tile::placement(o, Cell::new(1, 1), &dom).unwrap();
            let outline = t.boundary_vertices();
            assert_eq!(outline.len(), 10);
            assert_eq!(t.corners().len(), 8);
            let mut straight: Vec<Vertex> =
                outline.iter().filter(|&&(_, k)| k == 2).map(|&(v, _)| v).collect();
            let mut table = t.cornerless().to_vec();
            straight.sort();
            table.sort();
            assert_eq!(straight, table, "orientation {o:?}");
        }
    }

    #[test]
    fn b_types_for_flat_bottom() {
        let dom = d(2, 2);
        // flat side y = 0, vertices (2,0) and (3,0): (2,0) is white
        let t = tile_from(Orientation::Up, Cell::new(1, 0), &dom).unwrap();
        assert_eq!(t.white(), Some(Vertex::new(2, 0)));
        assert_eq!(t.b_type(), Some(BType::First));
        // flat side vertices (1,0) and (2,0): white is second
        let t = tile_from(Orientation::Up, Cell::new(0, 0), &dom).unwrap();
        assert_eq!(t.white(), Some(Vertex::new(2, 0)));
        assert_eq!(t.b_type(), Some(BType::Second));
    }

    #[test]
    fn bad_placements_are_reported() {
        let dom = d(2, 2);
        // flat side on y = 1: no white vertex there
        assert!(matches!(tile_from(Orientation::Up, Cell::new(0, 1), &dom), Err(Error::Placement(_))));
        // flat side through (4,0) black / (5,0): cornerless black, and the
        // corner (6,0)... is white
        let err = tile_from(Orientation::Up, Cell::new(3, 0), &dom).unwrap_err();
        assert!(matches!(err, Error::Placement(ref s) if s.contains("corner on white")), "{err}");
        assert!(matches!(tile_from(Orientation::Up, Cell::new(6, 0), &dom), Err(Error::Range(_))));
    }

    #[test]
    fn rotation_covariant_b_type() {
        // rotating the whole 8x8 domain by 90 degrees maps b-types onto
        // themselves
        let dom = d(2, 2);
        let size = dom.width();
        let rot = |o: Orientation| match o {
            Orientation::Up => Orientation::Left,
            Orientation::Left => Orientation::Down,
            Orientation::Down => Orientation::Right,
            Orientation::Right => Orientation::Up,
        };
        for o in Orientation::ALL {
            for j in 0..size {
                for i in 0..size {
                    let Ok(t) = tile_from(o, Cell::new(i, j), &dom) else { continue };
                    // counter-clockwise rotation about the centre: cell (i,j) -> (size-1-j, i)
                    let cells = t.cells().map(|c| Cell::new(size - 1 - c.j, c.i));
                    let ro = rot(o);
                    let min_i = cells.iter().map(|c| c.i).min().unwrap();
                    let min_j = cells.iter().map(|c| c.j).min().unwrap();
                    let r = Tile::placement(ro, Cell::new(min_i, min_j), &dom).unwrap();
                    let mut a = r.cells().to_vec();
                    let mut b = cells.to_vec();
                    a.sort();
                    b.sort();
                    assert_eq!(a, b);
                    assert_eq!(r.b_type(), t.b_type(), "{o:?} at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn validation_catches_defects() {
        let dom = d(1, 1);
        let pinwheel = vec![
            tile_from(Orientation::Up, Cell::new(0, 0), &dom),
            tile_from(Orientation::Left, Cell::new(2, 0), &dom),
            tile_from(Orientation::Down, Cell::new(1, 2), &dom),
            tile_from(Orientation::Right, Cell::new(0, 1), &dom),
        ]
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .unwrap();
        let good = Tiling::new(dom, pinwheel.clone());
        assert!(validate_tiling(&good).is_valid(), "{}", validate_tiling(&good));

        let missing = Tiling::new(dom, pinwheel[1..].to_vec());
        let report = validate_tiling(&missing);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::Uncovered(_))));

        let mut doubled = pinwheel.clone();
        doubled[0] = pinwheel[1];
        let report = validate_tiling(&Tiling::new(dom, doubled));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::DoubleCover(_))));
    }

    #[test]
    fn record_roundtrip_is_canonical() {
        let dom = d(1, 1);
        let tiles = vec![
            Tile::placement(Orientation::Right, Cell::new(0, 1), &dom).unwrap(),
            Tile::placement(Orientation::Up, Cell::new(0, 0), &dom).unwrap(),
        ];
        let rec = Tiling::new(dom, tiles).to_record();
        assert_eq!(rec.tiles[0].o, 1);
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(json, r#"{"m":1,"n":1,"tiles":[{"o":1,"anchor":[0,0]},{"o":2,"anchor":[0,1]}]}"#);
        let back = Tiling::from_record(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.to_record(), rec);
    }
}
