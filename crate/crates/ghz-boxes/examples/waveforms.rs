//! Emit the physical waveforms that realize a two-chambered box and write
//! them as CSV files under `waveform-data/`.
//!
//! ```bash
//! cargo run -p ghz-boxes --example waveforms
//! ```

use std::fs;

use ghz_boxes::doublewell::{
    emit_figure_data, orbital_overlap, square_well_wave, write_csv, Figure, OrbitalGeometry, Side,
    WellGeometry, OVERLAP_THRESHOLD,
};

fn main() -> ghz_boxes::Result<()> {
    let out_dir = std::path::Path::new("waveform-data");
    fs::create_dir_all(out_dir)?;

    let geometry = WellGeometry::default();
    println!(
        "square wells: width {}, gap {}, component value at the left midpoint {:.4}",
        geometry.well_width,
        geometry.gap,
        square_well_wave(
            &geometry,
            Side::L,
            geometry.left_edge + geometry.well_width / 2.0
        )
    );

    for figure in Figure::ALL {
        let data = emit_figure_data(figure, 512)?;
        for dataset in &data.datasets {
            let path = out_dir.join(format!("{figure}_{}.csv", dataset.name));
            let mut buffer = Vec::new();
            write_csv(dataset, &mut buffer)?;
            fs::write(&path, buffer)?;
            println!("wrote {} ({} rows)", path.display(), dataset.rows.len());
        }
        if let Some(overlap) = data.overlap {
            println!(
                "  orbital overlap at the default separation: {overlap:.6} (disjoint below {OVERLAP_THRESHOLD})"
            );
        }
    }

    println!("\noverlap versus separation (units of the Bohr radius):");
    for separation in [2.0, 4.0, 6.0, 8.0, 10.0, 12.0] {
        let overlap = orbital_overlap(&OrbitalGeometry::new(separation, 1.0)?);
        let marker = if overlap < OVERLAP_THRESHOLD {
            "  <- disjoint"
        } else {
            ""
        };
        println!("  {separation:>4}: {overlap:.6}{marker}");
    }
    Ok(())
}
