//! Writes a small synthetic dataset for driving the CLI by hand.
fn main() {
    let dir = std::env::args().nth(1).expect("usage: gen_verify OUT_DIR");
    let dir = std::path::PathBuf::from(dir);
    let faces = fairlens_core::synthetic::fixture_faces(150);
    fairlens_core::data_model::write_landmarks(
        &dir.join("landmarks.csv"),
        &faces,
        &fairlens_core::data_model::LandmarkSchema::default(),
    )
    .unwrap();
    let tax = fairlens_core::au_expression::ExpressionTaxonomy::default();
    let frames = fairlens_core::synthetic::fixture_frames(11, 150, &tax.au_universe());
    fairlens_core::data_model::write_au_frames(
        &dir.join("aus.csv"),
        &frames,
        &fairlens_core::data_model::AuSchema::for_aus(tax.au_universe()),
    )
    .unwrap();
    // pseudo-human channel, correlated with group to inject bias
    let mut csv = String::from("id,label\n");
    for (i, f) in faces.iter().enumerate() {
        let label = u8::from(i % 3 == 0 || (f.sensitive == 1 && i % 2 == 0));
        csv.push_str(&format!("{},{}\n", f.id, label));
    }
    std::fs::write(dir.join("human.csv"), csv).unwrap();
}
