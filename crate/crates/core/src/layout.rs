//! Spatial arrangement of anthologies in millimetre canvas space.
//!
//! Shelves stand spines side by side at their physical height, with a width
//! derived from the page count. Piles stack covers at their physical size
//! around jittered anchors. All coordinates are millimetres from the canvas
//! origin (top-left), and a placement's `(x_mm, y_mm)` is the centre of the
//! item's footprint.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::collection::{Anthology, Collection};
use crate::kmeans::{self, KMeansConfig};
use crate::palette;
use crate::{Error, Result};

/// Vertical gap between shelf rows.
pub const SHELF_GAP_MM: f64 = 25.0;
/// Maximum offset of a piled item from its pile anchor, per axis.
pub const PILE_JITTER_MM: f64 = 8.0;
/// Maximum absolute rotation of a piled item.
pub const PILE_ROTATION_DEG: f64 = 10.0;
/// Drops within this distance of a pile anchor join that pile.
pub const PILE_SNAP_RADIUS_MM: f64 = 30.0;
/// Free space around the largest cover in a pile grid cell.
const PILE_CELL_MARGIN_MM: f64 = 60.0;
/// Maximum offset of a pile anchor from its grid cell centre, per axis.
const ANCHOR_JITTER_MM: f64 = 15.0;

/// Linear spine-thickness model: a fixed cover allowance plus a per-leaf
/// thickness, with a floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThicknessModel {
    pub per_page_mm: f64,
    pub covers_mm: f64,
    pub min_mm: f64,
}

impl Default for ThicknessModel {
    fn default() -> Self {
        ThicknessModel { per_page_mm: 0.08, covers_mm: 1.0, min_mm: 2.0 }
    }
}

impl ThicknessModel {
    pub fn thickness_mm(&self, page_count: i64) -> f64 {
        (self.per_page_mm * page_count as f64 + self.covers_mm).max(self.min_mm)
    }
}

pub fn thickness_mm(page_count: i64) -> f64 {
    ThicknessModel::default().thickness_mm(page_count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutKind {
    Shelf,
    Pile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupBy {
    #[default]
    None,
    Color,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub id: String,
    pub x_mm: f64,
    pub y_mm: f64,
    /// Rendered footprint: spine thickness on a shelf, cover width in a pile.
    pub width_mm: f64,
    pub height_mm: f64,
    pub rotation_deg: f64,
    pub z_order: u64,
    pub pile_id: Option<String>,
}

impl Placement {
    /// Axis-aligned footprint `(left, top, right, bottom)`, ignoring rotation.
    pub fn rect(&self) -> [f64; 4] {
        let (hw, hh) = (self.width_mm / 2.0, self.height_mm / 2.0);
        [self.x_mm - hw, self.y_mm - hh, self.x_mm + hw, self.y_mm + hh]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pile {
    pub anchor: [f64; 2],
    pub members: Vec<String>,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutState {
    pub kind: LayoutKind,
    pub seed: u64,
    pub version: u64,
    pub placements: Vec<Placement>,
    pub piles: BTreeMap<String, Pile>,
}

impl LayoutState {
    pub fn placement(&self, id: &str) -> Option<&Placement> {
        self.placements.iter().find(|p| p.id == id)
    }
}

fn resolve<'c, S: AsRef<str>>(c: &'c Collection, ids: &[S]) -> Result<Vec<&'c Anthology>> {
    ids.iter().map(|id| c.require(id.as_ref())).collect()
}

/// Stands spines left to right in the given order, wrapping to a new row
/// when the next spine would pass `shelf_width_mm`. Spines in a row share a
/// bottom edge; each row starts [`SHELF_GAP_MM`] below the tallest spine of
/// the row above.
pub fn shelf_layout<S: AsRef<str>>(
    ids: &[S],
    c: &Collection,
    shelf_width_mm: f64,
    gap_mm: f64,
    thickness: &ThicknessModel,
) -> Result<LayoutState> {
    let items = resolve(c, ids)?;
    let spines: Vec<(f64, f64)> = items.iter().map(|a| (thickness.thickness_mm(a.page_count), a.height_mm)).collect();
    let thickest = spines.iter().map(|s| s.0).fold(0.0, f64::max);
    if !(shelf_width_mm >= thickest) {
        return Err(Error::ShelfTooNarrow { shelf_width_mm, required_mm: thickest });
    }
    let gap_mm = gap_mm.max(0.0);

    // Rows as index ranges plus the left edge of every spine.
    let mut rows: Vec<std::ops::Range<usize>> = Vec::new();
    let mut lefts = Vec::with_capacity(spines.len());
    let mut cursor = 0.0;
    let mut row_start = 0;
    for (i, &(w, _)) in spines.iter().enumerate() {
        if i > row_start && cursor + w > shelf_width_mm {
            rows.push(row_start..i);
            row_start = i;
            cursor = 0.0;
        }
        lefts.push(cursor);
        cursor += w + gap_mm;
    }
    if row_start < spines.len() {
        rows.push(row_start..spines.len());
    }

    let mut placements = Vec::with_capacity(items.len());
    let mut top = 0.0;
    for row in rows {
        let row_height = spines[row.clone()].iter().map(|s| s.1).fold(0.0, f64::max);
        let floor = top + row_height;
        for i in row {
            let (w, h) = spines[i];
            placements.push(Placement {
                id: items[i].id.clone(),
                x_mm: lefts[i] + w / 2.0,
                y_mm: floor - h / 2.0,
                width_mm: w,
                height_mm: h,
                rotation_deg: 0.0,
                z_order: i as u64,
                pile_id: None,
            });
        }
        top = floor + SHELF_GAP_MM;
    }

    Ok(LayoutState { kind: LayoutKind::Shelf, seed: 0, version: 0, placements, piles: BTreeMap::new() })
}

pub fn pile_key(index: usize) -> String {
    format!("pile-{index}")
}

/// Membership per pile, each list in input order.
fn group_members(items: &[&Anthology], n_piles: usize, group_by: GroupBy, seed: u64) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); n_piles];
    match group_by {
        GroupBy::None => {
            for i in 0..items.len() {
                groups[i % n_piles].push(i);
            }
        }
        GroupBy::Color => {
            let points: Vec<[f64; 3]> =
                items.iter().map(|a| palette::dominant_color(&a.palette).to_array()).collect();
            let clustering = kmeans::fit(&points, &vec![1.0; points.len()], KMeansConfig::new(n_piles, seed));
            // Number clusters by their first member so pile numbering follows input order.
            let mut order: Vec<usize> = Vec::new();
            for &cluster in &clustering.assignment {
                if !order.contains(&cluster) {
                    order.push(cluster);
                }
            }
            for (i, cluster) in clustering.assignment.iter().enumerate() {
                let pile = order.iter().position(|c| c == cluster).expect("cluster listed");
                groups[pile].push(i);
            }
        }
    }
    groups
}

/// Stacks anthologies into `n_piles` piles laid out on a jittered grid.
///
/// Items keep their physical footprint, sit within [`PILE_JITTER_MM`] of
/// their pile anchor and are rotated by at most [`PILE_ROTATION_DEG`].
/// Later members of a pile lie on top. Output depends only on the arguments.
pub fn pile_layout<S: AsRef<str>>(
    ids: &[S],
    c: &Collection,
    n_piles: usize,
    group_by: GroupBy,
    seed: u64,
) -> Result<LayoutState> {
    let items = resolve(c, ids)?;
    if n_piles == 0 || n_piles > items.len() {
        return Err(Error::TooManyPiles { requested: n_piles, available: items.len() });
    }
    let groups = group_members(&items, n_piles, group_by, seed);

    let cell_w = items.iter().map(|a| a.width_mm).fold(0.0, f64::max) + PILE_CELL_MARGIN_MM;
    let cell_h = items.iter().map(|a| a.height_mm).fold(0.0, f64::max) + PILE_CELL_MARGIN_MM;
    let columns = (n_piles as f64).sqrt().ceil() as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut piles = BTreeMap::new();
    let mut placements = Vec::with_capacity(items.len());
    let mut z = 0u64;
    for (p, members) in groups.iter().enumerate() {
        let (col, row) = (p % columns, p / columns);
        let anchor = [
            (col as f64 + 0.5) * cell_w + rng.gen_range(-ANCHOR_JITTER_MM..=ANCHOR_JITTER_MM),
            (row as f64 + 0.5) * cell_h + rng.gen_range(-ANCHOR_JITTER_MM..=ANCHOR_JITTER_MM),
        ];
        let key = pile_key(p);
        for &i in members {
            let a = items[i];
            placements.push(Placement {
                id: a.id.clone(),
                x_mm: anchor[0] + rng.gen_range(-PILE_JITTER_MM..=PILE_JITTER_MM),
                y_mm: anchor[1] + rng.gen_range(-PILE_JITTER_MM..=PILE_JITTER_MM),
                width_mm: a.width_mm,
                height_mm: a.height_mm,
                rotation_deg: rng.gen_range(-PILE_ROTATION_DEG..=PILE_ROTATION_DEG),
                z_order: z,
                pile_id: Some(key.clone()),
            });
            z += 1;
        }
        piles.insert(
            key,
            Pile { anchor, members: members.iter().map(|&i| items[i].id.clone()).collect(), label: None },
        );
    }

    Ok(LayoutState { kind: LayoutKind::Pile, seed, version: 0, placements, piles })
}

/// Drops an item at a new position, bringing it to the top. Landing within
/// [`PILE_SNAP_RADIUS_MM`] of a pile anchor joins the nearest such pile;
/// anywhere else leaves the item on its own.
pub fn move_item(layout: &LayoutState, id: &str, x_mm: f64, y_mm: f64) -> Result<LayoutState> {
    if layout.kind != LayoutKind::Pile {
        return Err(Error::WrongLayoutKind);
    }
    let index = layout
        .placements
        .iter()
        .position(|p| p.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_owned()))?;

    let snapped = layout
        .piles
        .iter()
        .map(|(key, pile)| (key, (pile.anchor[0] - x_mm).hypot(pile.anchor[1] - y_mm)))
        .filter(|(_, d)| *d <= PILE_SNAP_RADIUS_MM)
        .fold(None::<(&String, f64)>, |best, (key, d)| match best {
            Some((_, bd)) if bd <= d => best,
            _ => Some((key, d)),
        })
        .map(|(key, _)| key.clone());

    let mut next = layout.clone();
    let top = layout.placements.iter().map(|p| p.z_order).max().unwrap_or(0);
    let placement = &mut next.placements[index];
    placement.x_mm = x_mm;
    placement.y_mm = y_mm;
    placement.z_order = top + 1;
    placement.pile_id = snapped.clone();

    // Pile member lists run bottom to top, so the dropped item goes last.
    if let Some(old) = layout.placements[index].pile_id.as_ref().and_then(|key| next.piles.get_mut(key)) {
        old.members.retain(|m| m != id);
    }
    if let Some(pile) = snapped.as_ref().and_then(|key| next.piles.get_mut(key)) {
        pile.members.push(id.to_owned());
    }
    next.version += 1;
    Ok(next)
}

/// Sets or clears the label written under a pile.
pub fn set_pile_label(layout: &LayoutState, pile_id: &str, label: Option<String>) -> Result<LayoutState> {
    let mut next = layout.clone();
    let pile = next.piles.get_mut(pile_id).ok_or_else(|| Error::UnknownPile(pile_id.to_owned()))?;
    pile.label = label.filter(|l| !l.is_empty());
    next.version += 1;
    Ok(next)
}

pub const MIN_PX_PER_MM: f64 = 0.1;
pub const MAX_PX_PER_MM: f64 = 20.0;
/// The ruler uses the finest step that keeps at most this many ticks on screen.
pub const MAX_RULER_TICKS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RulerTick {
    pub mm: f64,
    pub label: String,
}

/// Tick spacing is `mantissa × 10^exponent` millimetres with mantissa 1, 2 or 5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ruler {
    pub step_mantissa: u8,
    pub step_exponent: i32,
    pub step_mm: f64,
    pub ticks: Vec<RulerTick>,
}

fn format_mm(mm: f64) -> String {
    if mm >= 1000.0 && (mm / 1000.0).fract() == 0.0 {
        format!("{} m", mm / 1000.0)
    } else if mm >= 10.0 && (mm / 10.0).fract() == 0.0 {
        format!("{} cm", mm / 10.0)
    } else {
        format!("{mm} mm")
    }
}

fn step_value(mantissa: u8, exponent: i32) -> f64 {
    // Divide for negative exponents so 0.1, 0.2, 0.5 come out exactly rounded.
    if exponent >= 0 {
        f64::from(mantissa) * 10f64.powi(exponent)
    } else {
        f64::from(mantissa) / 10f64.powi(-exponent)
    }
}

/// Ruler ticks for a viewport `viewport_px` pixels long at `px_per_mm`.
pub fn ruler_ticks(px_per_mm: f64, viewport_px: f64) -> Ruler {
    let span_mm = viewport_px / px_per_mm;
    let tick_count = |step: f64| (span_mm / step + 1e-9).floor() as usize + 1;

    let mut exponent = (span_mm / MAX_RULER_TICKS as f64).log10().floor() as i32 - 1;
    let (mantissa, exponent) = 'search: loop {
        for mantissa in [1u8, 2, 5] {
            if tick_count(step_value(mantissa, exponent)) <= MAX_RULER_TICKS {
                break 'search (mantissa, exponent);
            }
        }
        exponent += 1;
    };
    let step_mm = step_value(mantissa, exponent);
    let ticks = (0..tick_count(step_mm))
        .map(|i| {
            let mm = if exponent >= 0 {
                i as f64 * step_mm
            } else {
                (i as f64 * f64::from(mantissa)) / 10f64.powi(-exponent)
            };
            RulerTick { mm, label: format_mm(mm) }
        })
        .collect();
    Ruler { step_mantissa: mantissa, step_exponent: exponent, step_mm, ticks }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSpec {
    pub px_per_mm: f64,
    pub min_px_per_mm: f64,
    pub max_px_per_mm: f64,
    pub ruler: Ruler,
    pub viewport_px: f64,
}

impl ScaleSpec {
    pub fn new(px_per_mm: f64, viewport_px: f64) -> Self {
        let px_per_mm = px_per_mm.clamp(MIN_PX_PER_MM, MAX_PX_PER_MM);
        ScaleSpec {
            px_per_mm,
            min_px_per_mm: MIN_PX_PER_MM,
            max_px_per_mm: MAX_PX_PER_MM,
            ruler: ruler_ticks(px_per_mm, viewport_px),
            viewport_px,
        }
    }

    fn with_px_per_mm(&self, px_per_mm: f64) -> Self {
        ScaleSpec {
            px_per_mm: px_per_mm.clamp(self.min_px_per_mm, self.max_px_per_mm),
            ruler: ruler_ticks(px_per_mm.clamp(self.min_px_per_mm, self.max_px_per_mm), self.viewport_px),
            ..self.clone()
        }
    }
}

/// Zooms by `factor` about `anchor_px` (measured from the canvas origin in
/// current screen pixels). Returns the new scale and the change in canvas
/// offset that keeps the millimetre point under the anchor fixed.
pub fn zoom_at(s: &ScaleSpec, factor: f64, anchor_px: [f64; 2]) -> (ScaleSpec, [f64; 2]) {
    let next = s.with_px_per_mm(s.px_per_mm * factor);
    if next.px_per_mm == s.px_per_mm {
        return (next, [0.0, 0.0]);
    }
    let ratio = next.px_per_mm / s.px_per_mm;
    (next, anchor_px.map(|a| a - a * ratio))
}

/// Screen mapping `px = mm × px_per_mm + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanvasView {
    pub scale: ScaleSpec,
    pub offset_px: [f64; 2],
}

impl CanvasView {
    pub fn new(scale: ScaleSpec) -> Self {
        CanvasView { scale, offset_px: [0.0, 0.0] }
    }

    pub fn mm_to_px(&self, mm: [f64; 2]) -> [f64; 2] {
        [mm[0] * self.scale.px_per_mm + self.offset_px[0], mm[1] * self.scale.px_per_mm + self.offset_px[1]]
    }

    pub fn px_to_mm(&self, px: [f64; 2]) -> [f64; 2] {
        [(px[0] - self.offset_px[0]) / self.scale.px_per_mm, (px[1] - self.offset_px[1]) / self.scale.px_per_mm]
    }

    /// Anchor-preserving zoom about a screen point.
    pub fn zoom_at(&mut self, factor: f64, anchor_px: [f64; 2]) {
        let relative = [anchor_px[0] - self.offset_px[0], anchor_px[1] - self.offset_px[1]];
        let (scale, delta) = zoom_at(&self.scale, factor, relative);
        self.scale = scale;
        self.offset_px = [self.offset_px[0] + delta[0], self.offset_px[1] + delta[1]];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::Story;
    use crate::palette::{srgb_to_lab, ColorPalette, PaletteEntry, Srgb};

    fn anthology(id: &str, width: f64, height: f64, pages: i64, color: Srgb) -> Anthology {
        Anthology {
            id: id.into(),
            title: id.into(),
            height_mm: height,
            width_mm: width,
            page_count: pages,
            cover_material: "card".into(),
            page_material: "pulp".into(),
            binding: "staples".into(),
            cover_image: format!("{id}.png"),
            spine_image: None,
            stories: vec![Story { title: "s".into(), publication_year: 1950 }],
            palette: ColorPalette::new(vec![PaletteEntry { lab: srgb_to_lab(color), srgb: color, proportion: 1.0 }]),
        }
    }

    fn collection(n: usize) -> Collection {
        Collection::new(
            (0..n)
                .map(|i| anthology(&format!("a{i}"), 100.0 + i as f64, 150.0 + 3.0 * i as f64, 100, Srgb::new(200, 10, 10)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn thickness_formula() {
        assert_eq!(thickness_mm(100), 9.0);
        assert_eq!(thickness_mm(1), 2.0);
        assert_eq!(thickness_mm(500), 41.0);
    }

    #[test]
    fn single_spine() {
        let c = Collection::new(vec![anthology("x", 140.0, 200.0, 100, Srgb::new(1, 2, 3))]).unwrap();
        let l = shelf_layout(&["x"], &c, 500.0, 1.0, &ThicknessModel::default()).unwrap();
        let p = &l.placements[0];
        assert_eq!((p.width_mm, p.height_mm), (9.0, 200.0));
        assert_eq!(p.rect(), [0.0, 0.0, 9.0, 200.0]);
        assert_eq!((p.rotation_deg, p.z_order, p.pile_id.clone()), (0.0, 0, None));
    }

    #[test]
    fn shelf_wraps_and_aligns_bottoms() {
        let c = Collection::new(vec![
            anthology("a", 140.0, 200.0, 100, Srgb::new(1, 2, 3)),
            anthology("b", 140.0, 180.0, 100, Srgb::new(1, 2, 3)),
        ])
        .unwrap();
        let l = shelf_layout(&["a", "b"], &c, 15.0, 0.0, &ThicknessModel::default()).unwrap();
        assert_eq!(l.placements[1].rect(), [0.0, 225.0, 9.0, 405.0]);

        let wide = shelf_layout(&["a", "b"], &c, 500.0, 2.0, &ThicknessModel::default()).unwrap();
        assert_eq!(wide.placements[0].rect()[3], wide.placements[1].rect()[3]);
        assert_eq!(wide.placements[1].rect()[0], 11.0);
    }

    #[test]
    fn shelf_errors() {
        let c = collection(2);
        assert!(matches!(
            shelf_layout(&["a0"], &c, 5.0, 0.0, &ThicknessModel::default()),
            Err(Error::ShelfTooNarrow { .. })
        ));
        assert!(matches!(
            shelf_layout(&["nope"], &c, 500.0, 0.0, &ThicknessModel::default()),
            Err(Error::UnknownId(_))
        ));
    }

    #[test]
    fn pile_is_deterministic_and_bounded() {
        let c = collection(12);
        let ids = c.ids();
        let a = pile_layout(&ids, &c, 3, GroupBy::None, 42).unwrap();
        assert_eq!(a, pile_layout(&ids, &c, 3, GroupBy::None, 42).unwrap());
        assert_ne!(a, pile_layout(&ids, &c, 3, GroupBy::None, 43).unwrap());
        assert_eq!(a.piles.len(), 3);
        for p in &a.placements {
            let anchor = a.piles[p.pile_id.as_ref().unwrap()].anchor;
            assert!((p.x_mm - anchor[0]).abs() <= PILE_JITTER_MM);
            assert!((p.y_mm - anchor[1]).abs() <= PILE_JITTER_MM);
            assert!(p.rotation_deg.abs() <= PILE_ROTATION_DEG);
        }
        let mut z: Vec<u64> = a.placements.iter().map(|p| p.z_order).collect();
        z.sort_unstable();
        assert_eq!(z, (0..12).collect::<Vec<_>>());
        // Round-robin membership.
        assert_eq!(a.piles["pile-0"].members, vec!["a0", "a3", "a6", "a9"]);
    }

    #[test]
    fn pile_errors() {
        let c = collection(2);
        assert!(matches!(pile_layout(&["a0", "a1"], &c, 3, GroupBy::None, 0), Err(Error::TooManyPiles { .. })));
        assert!(matches!(pile_layout(&["a0"], &c, 0, GroupBy::None, 0), Err(Error::TooManyPiles { .. })));
        assert!(matches!(pile_layout(&["zz"], &c, 1, GroupBy::None, 0), Err(Error::UnknownId(_))));
    }

    fn piled() -> LayoutState {
        let c = collection(6);
        pile_layout(&c.ids(), &c, 2, GroupBy::None, 7).unwrap()
    }

    #[test]
    fn move_far_from_piles() {
        let l = piled();
        let moved = move_item(&l, "a1", 5000.0, 5000.0).unwrap();
        let p = moved.placement("a1").unwrap();
        assert_eq!((p.x_mm, p.y_mm, p.pile_id.clone(), p.z_order), (5000.0, 5000.0, None, 6));
        assert_eq!(moved.version, l.version + 1);
        assert!(!moved.piles["pile-1"].members.contains(&"a1".to_owned()));
        for (before, after) in l.placements.iter().zip(&moved.placements) {
            if before.id != "a1" {
                assert_eq!(before, after);
            }
        }
    }

    #[test]
    fn move_snaps_to_nearby_pile() {
        let l = piled();
        let anchor = l.piles["pile-1"].anchor;
        let moved = move_item(&l, "a0", anchor[0] + 29.0, anchor[1]).unwrap();
        assert_eq!(moved.placement("a0").unwrap().pile_id.as_deref(), Some("pile-1"));
        assert_eq!(moved.piles["pile-1"].members.last().map(String::as_str), Some("a0"));
        assert!(!moved.piles["pile-0"].members.contains(&"a0".to_owned()));

        let edge = move_item(&l, "a0", anchor[0], anchor[1] + PILE_SNAP_RADIUS_MM).unwrap();
        assert_eq!(edge.placement("a0").unwrap().pile_id.as_deref(), Some("pile-1"));
    }

    #[test]
    fn move_errors() {
        let l = piled();
        assert!(matches!(move_item(&l, "ghost", 0.0, 0.0), Err(Error::UnknownId(_))));
        let c = collection(2);
        let shelf = shelf_layout(&c.ids(), &c, 500.0, 0.0, &ThicknessModel::default()).unwrap();
        assert!(matches!(move_item(&shelf, "a0", 0.0, 0.0), Err(Error::WrongLayoutKind)));
    }

    #[test]
    fn pile_labels() {
        let l = piled();
        let labelled = set_pile_label(&l, "pile-0", Some("reds".into())).unwrap();
        assert_eq!(labelled.piles["pile-0"].label.as_deref(), Some("reds"));
        assert_eq!(labelled.version, 1);
        assert!(matches!(set_pile_label(&l, "pile-9", None), Err(Error::UnknownPile(_))));
    }

    #[test]
    fn ruler_examples() {
        let r = ruler_ticks(2.0, 400.0);
        assert_eq!(r.step_mm, 50.0);
        assert_eq!(r.ticks.iter().map(|t| t.mm).collect::<Vec<_>>(), vec![0.0, 50.0, 100.0, 150.0, 200.0]);

        let r = ruler_ticks(10.0, 100.0);
        assert_eq!(r.step_mm, 2.0);
        assert_eq!(r.ticks.iter().map(|t| t.mm).collect::<Vec<_>>(), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(r.ticks[5].label, "1 cm");

        let r = ruler_ticks(20.0, 10.0);
        assert_eq!((r.step_mantissa, r.step_exponent), (1, -1));
        assert_eq!(r.ticks.last().unwrap().mm, 0.5);
    }

    #[test]
    fn zoom_examples() {
        let s = ScaleSpec::new(2.0, 800.0);
        assert_eq!(zoom_at(&s, 1.0, [300.0, 200.0]), (s.clone(), [0.0, 0.0]));
        assert_eq!(zoom_at(&s, 1000.0, [0.0, 0.0]).0.px_per_mm, MAX_PX_PER_MM);
        assert_eq!(zoom_at(&s, 1e-6, [0.0, 0.0]).0.px_per_mm, MIN_PX_PER_MM);

        let mut view = CanvasView::new(s);
        view.offset_px = [-40.0, 15.0];
        let centre_mm = [150.0, 210.0];
        let anchor = view.mm_to_px(centre_mm);
        view.zoom_at(2.0, anchor);
        assert_eq!(view.scale.px_per_mm, 4.0);
        let back = view.px_to_mm(anchor);
        assert!((back[0] - centre_mm[0]).abs() < 1e-9 && (back[1] - centre_mm[1]).abs() < 1e-9);
    }
}
