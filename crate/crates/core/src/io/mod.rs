//! Plain-text interchange: CSV for curves, direction profiles and
//! sequences; SVG 1.1 for figures.

mod csv;
mod svg;

pub use self::csv::{
    curve_samples, read_curve_csv, read_profile_csv, read_sequence_csv, write_curve_csv, write_profile_csv,
    write_sequence_csv, CurveSample, ProfileRow,
};
pub use self::svg::{parse_svg, SvgDocument, SvgPolyline};
