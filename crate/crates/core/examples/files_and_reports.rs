//! Matrix files, fusion-frame files and JSON reports, plus the CLI entry
//! point driven in-process.

use naimark::io::{parse_matrix, serialize_fusion_frame, serialize_matrix};
use naimark::random::Sampler;
use naimark::Field;

fn main() -> naimark::Result<()> {
    let m = parse_matrix("1,0\n0,0.5\n")?;
    let text = serialize_matrix(&m);
    print!("CSV input re-emitted as JSON:\n{text}");
    assert_eq!(serialize_matrix(&parse_matrix(&text)?), text);

    let ff = Sampler::new(1).fusion_frame(Field::Complex, 2, &[1]);
    print!("fusion frame file:\n{}", serialize_fusion_frame(&ff));

    let dir = std::env::temp_dir().join("naimark-example");
    std::fs::create_dir_all(&dir).map_err(|e| naimark::NaimarkError::InvalidInput(e.to_string()))?;
    let path = dir.join("e1.json");
    std::fs::write(&path, &text).map_err(|e| naimark::NaimarkError::InvalidInput(e.to_string()))?;

    let mut out = Vec::new();
    let mut err = Vec::new();
    let path = path.to_string_lossy().into_owned();
    let code = naimark::cli::run(["naimark", "complement", &path, "--verify", "--json"], &mut out, &mut err);
    println!("naimark complement --verify --json exited with {code}:");
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}
