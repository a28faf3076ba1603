//! CSV writers. All numeric cells are rendered with 17 significant digits,
//! which round-trips `f64` exactly, and output is byte-deterministic for
//! fixed inputs.

use revolt_core::{BasinMap, BasinTag, Model, OutcomeMap, Terminal, Trajectory};
use std::io::{self, Write};

/// 17 significant digits; enough to reconstruct the exact bits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Columns `t,SB,SR,CR,CB` (plus `S` for the opportunistic variant), one row
/// per recorded sample, and a trailing comment line with the terminal status.
pub fn write_trajectory_csv(
    w: &mut impl Write,
    model: &Model,
    traj: &Trajectory,
) -> io::Result<()> {
    let dynamic_s = matches!(model, Model::Opportunistic { .. });
    if dynamic_s {
        writeln!(w, "t,SB,SR,CR,CB,S")?;
    } else {
        writeln!(w, "t,SB,SR,CR,CB")?;
    }
    for p in &traj.samples {
        let base = format!(
            "{},{},{},{},{}",
            fmt_f64(p.t),
            fmt_f64(p.sb),
            fmt_f64(p.sr()),
            fmt_f64(p.cr),
            fmt_f64(p.cb())
        );
        if dynamic_s {
            writeln!(w, "{base},{}", fmt_f64(p.s))?;
        } else {
            writeln!(w, "{base}")?;
        }
    }
    match traj.terminal {
        Terminal::ConvergedToEquilibrium(kind) => {
            writeln!(w, "# terminal = converged:{kind}")
        }
        Terminal::HorizonReached => writeln!(w, "# terminal = horizon"),
    }
}

/// Columns `axis1,axis2,outcome_tag,blue_fraction`, row-major over the grid.
pub fn write_grid_csv(w: &mut impl Write, map: &OutcomeMap) -> io::Result<()> {
    writeln!(w, "axis1,axis2,outcome_tag,blue_fraction")?;
    for cell in &map.cells {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f64(cell.x),
            fmt_f64(cell.y),
            cell.outcome.tag(),
            fmt_f64(cell.blue_fraction.unwrap_or(f64::NAN))
        )?;
    }
    Ok(())
}

/// Basin cells in the same schema as outcome grids; victory basins map to
/// Blue fractions 1 and 0.
pub fn write_basin_csv(w: &mut impl Write, map: &BasinMap) -> io::Result<()> {
    writeln!(w, "axis1,axis2,outcome_tag,blue_fraction")?;
    for cell in &map.cells {
        let fraction = match cell.tag {
            BasinTag::BlueVictory => 1.0,
            BasinTag::RedVictory => 0.0,
            _ => f64::NAN,
        };
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f64(cell.x),
            fmt_f64(cell.y),
            cell.tag.tag(),
            fmt_f64(fraction)
        )?;
    }
    Ok(())
}

/// Separatrix samples: `axis1,axis2,bracket_lo,bracket_hi`.
pub fn write_separatrix_csv(w: &mut impl Write, map: &BasinMap) -> io::Result<()> {
    writeln!(w, "axis1,axis2,bracket_lo,bracket_hi")?;
    for s in &map.separatrix {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f64(s.x),
            fmt_f64(s.y),
            fmt_f64(s.lo),
            fmt_f64(s.hi)
        )?;
    }
    Ok(())
}
