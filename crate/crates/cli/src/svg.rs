//! SVG 1.1 heatmap rendering for outcome maps, Blue-control surfaces, and
//! basin maps. Static figures only; output bytes depend only on the input
//! grid.

use revolt_core::{BasinMap, BasinTag, CellOutcome, OutcomeMap};
use std::fmt::Write;

const PLOT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_BOTTOM: f64 = 50.0;
const MARGIN_TOP: f64 = 34.0;
const MARGIN_RIGHT: f64 = 24.0;

const COLOR_BLUE: &str = "#2166ac";
const COLOR_RED: &str = "#b2182b";
const COLOR_GRAY: &str = "#bdbdbd";
const COLOR_MARGINAL: &str = "#ffd700";
const COLOR_WHITE: &str = "#ffffff";
const COLOR_INCONCLUSIVE: &str = "#ffe082";
const COLOR_BOUNDARY: &str = "#000000";

struct Canvas {
    body: String,
    width: f64,
    height: f64,
}

impl Canvas {
    fn new() -> Self {
        Self {
            body: String::new(),
            width: MARGIN_LEFT + PLOT + MARGIN_RIGHT,
            height: MARGIN_TOP + PLOT + MARGIN_BOTTOM,
        }
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        writeln!(
            self.body,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}"/>"#
        )
        .unwrap();
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        writeln!(
            self.body,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.1}" fill="{fill}"/>"#
        )
        .unwrap();
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, size: u32, content: &str) {
        writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="{size}">{content}</text>"#
        )
        .unwrap();
    }

    fn frame_and_labels(&mut self, title: &str, x_label: &str, y_label: &str, extents: [f64; 4]) {
        let [x_min, x_max, y_min, y_max] = extents;
        writeln!(
            self.body,
            r##"<rect x="{MARGIN_LEFT:.2}" y="{MARGIN_TOP:.2}" width="{PLOT:.2}" height="{PLOT:.2}" fill="none" stroke="#333333" stroke-width="1"/>"##
        )
        .unwrap();
        self.text(
            MARGIN_LEFT + PLOT / 2.0,
            MARGIN_TOP - 12.0,
            "middle",
            15,
            title,
        );
        self.text(
            MARGIN_LEFT + PLOT / 2.0,
            MARGIN_TOP + PLOT + 36.0,
            "middle",
            13,
            x_label,
        );
        writeln!(
            self.body,
            r#"<text x="16" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {:.2})">{}</text>"#,
            MARGIN_TOP + PLOT / 2.0,
            MARGIN_TOP + PLOT / 2.0,
            y_label
        )
        .unwrap();
        self.text(
            MARGIN_LEFT,
            MARGIN_TOP + PLOT + 16.0,
            "middle",
            11,
            &format!("{x_min}"),
        );
        self.text(
            MARGIN_LEFT + PLOT,
            MARGIN_TOP + PLOT + 16.0,
            "middle",
            11,
            &format!("{x_max}"),
        );
        self.text(
            MARGIN_LEFT - 8.0,
            MARGIN_TOP + PLOT + 4.0,
            "end",
            11,
            &format!("{y_min}"),
        );
        self.text(
            MARGIN_LEFT - 8.0,
            MARGIN_TOP + 10.0,
            "end",
            11,
            &format!("{y_max}"),
        );
    }

    fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n<rect width=\"{:.0}\" height=\"{:.0}\" fill=\"{}\"/>\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.width, self.height, COLOR_WHITE, self.body
        )
    }
}

/// Grid coordinates of cell centers mapped onto the plot area; the first and
/// last values sit on the frame, each cell drawn as one tile.
fn tiles(count: usize) -> Vec<(f64, f64)> {
    let w = PLOT / count as f64;
    (0..count)
        .map(|i| (MARGIN_LEFT + i as f64 * w, w))
        .collect()
}

fn tile_y(count: usize) -> Vec<(f64, f64)> {
    // SVG y grows downward; grid rows grow upward.
    let h = PLOT / count as f64;
    (0..count)
        .map(|i| (MARGIN_TOP + PLOT - (i as f64 + 1.0) * h, h))
        .collect()
}

fn outcome_color(outcome: CellOutcome) -> &'static str {
    match outcome {
        CellOutcome::BlueVictory => COLOR_BLUE,
        CellOutcome::RedVictory => COLOR_RED,
        CellOutcome::Stalemate => COLOR_GRAY,
        CellOutcome::Marginal => COLOR_MARGINAL,
        CellOutcome::Excluded => COLOR_WHITE,
    }
}

/// Diverging red-white-blue ramp for the Blue-controlled fraction.
fn fraction_color(v: f64) -> String {
    let v = v.clamp(0.0, 1.0);
    let lerp = |a: u8, b: u8, t: f64| (a as f64 + (b as f64 - a as f64) * t).round() as u8;
    let (r0, g0, b0) = (0xb2, 0x18, 0x2b);
    let (r1, g1, b1) = (0xf7, 0xf7, 0xf7);
    let (r2, g2, b2) = (0x21, 0x66, 0xac);
    let (r, g, b) = if v < 0.5 {
        let t = v / 0.5;
        (lerp(r0, r1, t), lerp(g0, g1, t), lerp(b0, b1, t))
    } else {
        let t = (v - 0.5) / 0.5;
        (lerp(r1, r2, t), lerp(g1, g2, t), lerp(b1, b2, t))
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn grid_extents(map: &OutcomeMap) -> [f64; 4] {
    [
        map.spec.x.min,
        map.spec.x.max,
        map.spec.y.min,
        map.spec.y.max,
    ]
}

/// Outcome heatmap: blue/red victories, gray stalemate, white excluded,
/// marginal boundary cells in a distinct color.
pub fn svg_outcome_map(map: &OutcomeMap, title: &str) -> String {
    let mut canvas = Canvas::new();
    let xs = tiles(map.spec.x.count);
    let ys = tile_y(map.spec.y.count);
    for (iy, &(y, h)) in ys.iter().enumerate() {
        for (ix, &(x, w)) in xs.iter().enumerate() {
            let cell = map.cell(ix, iy);
            canvas.rect(x, y, w, h, outcome_color(cell.outcome));
        }
    }
    canvas.frame_and_labels(
        title,
        map.spec.x.param.name(),
        map.spec.y.param.name(),
        grid_extents(map),
    );
    canvas.finish()
}

/// Continuous surface of the Blue-controlled fraction at the attractor.
pub fn svg_surface(map: &OutcomeMap, title: &str) -> String {
    let mut canvas = Canvas::new();
    let xs = tiles(map.spec.x.count);
    let ys = tile_y(map.spec.y.count);
    for (iy, &(y, h)) in ys.iter().enumerate() {
        for (ix, &(x, w)) in xs.iter().enumerate() {
            let cell = map.cell(ix, iy);
            let color = match cell.blue_fraction {
                Some(v) => fraction_color(v),
                None => COLOR_WHITE.to_string(),
            };
            canvas.rect(x, y, w, h, &color);
        }
    }
    canvas.frame_and_labels(
        title,
        map.spec.x.param.name(),
        map.spec.y.param.name(),
        grid_extents(map),
    );
    canvas.finish()
}

/// Basin map over initial conditions with separatrix samples drawn on top.
pub fn svg_basin(map: &BasinMap, title: &str) -> String {
    let mut canvas = Canvas::new();
    let nx = map.spec.x.count;
    let ny = map.spec.y.count;
    let xs = tiles(nx);
    let ys = tile_y(ny);
    for (i, cell) in map.cells.iter().enumerate() {
        let (ix, iy) = (i % nx, i / nx);
        let color = match cell.tag {
            BasinTag::BlueVictory => COLOR_BLUE,
            BasinTag::RedVictory => COLOR_RED,
            BasinTag::OnBoundary => COLOR_BOUNDARY,
            BasinTag::Inconclusive => COLOR_INCONCLUSIVE,
            BasinTag::OutOfDomain => COLOR_WHITE,
        };
        canvas.rect(xs[ix].0, ys[iy].0, xs[ix].1, ys[iy].1, color);
    }
    // Separatrix samples in data coordinates.
    let to_px = |x: f64, lo: f64, hi: f64| MARGIN_LEFT + (x - lo) / (hi - lo) * PLOT;
    let to_py = |y: f64, lo: f64, hi: f64| MARGIN_TOP + PLOT - (y - lo) / (hi - lo) * PLOT;
    for s in &map.separatrix {
        canvas.circle(
            to_px(s.x, map.spec.x.min, map.spec.x.max),
            to_py(s.y, map.spec.y.min, map.spec.y.max),
            2.0,
            COLOR_BOUNDARY,
        );
    }
    canvas.frame_and_labels(
        title,
        map.spec.x.coord.name(),
        map.spec.y.coord.name(),
        [
            map.spec.x.min,
            map.spec.x.max,
            map.spec.y.min,
            map.spec.y.max,
        ],
    );
    canvas.finish()
}
