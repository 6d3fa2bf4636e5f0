use std::ffi::{CStr, CString};
use std::ptr;

use seqsem_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(seqsem_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

struct Fixture {
    params: *mut SeqsemParams,
    structure: *mut SeqsemStructure,
    partition: *mut SeqsemPartition,
}

impl Fixture {
    fn new(db: &str) -> Self {
        let mut params = ptr::null_mut();
        let mut structure = ptr::null_mut();
        let mut partition = ptr::null_mut();
        unsafe {
            assert_eq!(seqsem_params_default(&mut params), SeqsemStatus::Ok);
            assert_eq!(
                seqsem_structure_parse(c(db).as_ptr(), &mut structure),
                SeqsemStatus::Ok
            );
            assert_eq!(
                seqsem_partition_new(params, structure, &mut partition),
                SeqsemStatus::Ok
            );
        }
        Fixture {
            params,
            structure,
            partition,
        }
    }
}

impl Drop for Fixture {
    fn drop(&mut self) {
        unsafe {
            seqsem_partition_free(self.partition);
            seqsem_structure_free(self.structure);
            seqsem_params_free(self.params);
        }
    }
}

#[test]
fn open_chain_partition() {
    let f = Fixture::new(".....");
    let mut log_q = 0.0;
    assert_eq!(
        unsafe { seqsem_partition_log_q(f.partition, &mut log_q) },
        SeqsemStatus::Ok
    );
    assert_eq!(log_q, 5.0 * 4f64.ln());
    assert_eq!(unsafe { seqsem_structure_len(f.structure) }, 5);
    assert_eq!(unsafe { seqsem_structure_arc_count(f.structure) }, 0);
}

#[test]
fn matches_the_library() {
    let f = Fixture::new("((((....))))");
    let p = seqsem::EnergyParams::default_set();
    let s = seqsem::parse_dot_bracket("((((....))))").unwrap();
    let want = seqsem::partition_function(&p, &s);

    let mut log_q = 0.0;
    unsafe { seqsem_partition_log_q(f.partition, &mut log_q) };
    assert_eq!(log_q, want.log_q().ln());

    let mut table = [0.0f64; 16];
    assert_eq!(
        unsafe { seqsem_partition_arc_table(f.partition, 0, table.as_mut_ptr()) },
        SeqsemStatus::Ok
    );
    let flat: Vec<f64> = want.table(0).iter().flatten().map(|w| w.ln()).collect();
    assert_eq!(table.to_vec(), flat);
    assert_eq!(
        unsafe { seqsem_partition_arc_table(f.partition, 9, table.as_mut_ptr()) },
        SeqsemStatus::InvalidArgument
    );

    let mut buf = [0 as std::ffi::c_char; 13];
    let (mut lp, mut e) = (0.0, 0.0);
    assert_eq!(
        unsafe {
            seqsem_sample(
                f.partition,
                5,
                3,
                buf.as_mut_ptr(),
                buf.len(),
                &mut lp,
                &mut e,
            )
        },
        SeqsemStatus::Ok
    );
    let got = unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_str()
        .unwrap()
        .to_string();
    let draws = seqsem::sample_ensemble(&p, &s, 4, 5);
    assert_eq!(got, draws[3].sequence.to_string());
    assert_eq!(lp, draws[3].log_prob);

    let mut energy = 0.0;
    assert_eq!(
        unsafe { seqsem_energy(f.params, c(&got).as_ptr(), f.structure, &mut energy) },
        SeqsemStatus::Ok
    );
    assert_eq!(energy, e);
}

#[test]
fn ensemble_buffer() {
    let f = Fixture::new("(...)");
    let mut buf = vec![0 as std::ffi::c_char; 3 * 5 + 1];
    assert_eq!(
        unsafe { seqsem_sample_ensemble(f.partition, 3, 1, buf.as_mut_ptr(), buf.len()) },
        SeqsemStatus::Ok
    );
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_bytes().len(), 15);
    assert_eq!(
        unsafe { seqsem_sample_ensemble(f.partition, 3, 1, buf.as_mut_ptr(), 15) },
        SeqsemStatus::BufferTooSmall
    );
    assert!(last_error().contains("16 bytes"));
}

#[test]
fn pattern_probabilities_sum_to_one() {
    let f = Fixture::new("((....))");
    let mut total = 0.0;
    for b in ["A", "C", "G", "U"] {
        let mut p = 0.0;
        assert_eq!(
            unsafe { seqsem_pattern_probability(f.partition, 4, c(b).as_ptr(), &mut p) },
            SeqsemStatus::Ok
        );
        total += p;
    }
    assert!((total - 1.0).abs() < 1e-12);
    let mut p = 0.0;
    assert_eq!(
        unsafe { seqsem_pattern_probability(f.partition, 8, c("AA").as_ptr(), &mut p) },
        SeqsemStatus::InvalidArgument
    );
}

#[test]
fn folding() {
    let mut params = ptr::null_mut();
    unsafe { seqsem_params_default(&mut params) };
    let seq = c("GGGGAAACCCC");
    let mut buf = [0 as std::ffi::c_char; 32];
    let mut e = 0.0;
    assert_eq!(
        unsafe { seqsem_fold_mfe(params, seq.as_ptr(), buf.as_mut_ptr(), buf.len(), &mut e) },
        SeqsemStatus::Ok
    );
    let db = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    let want = seqsem::mfe_fold(
        &seqsem::EnergyParams::default_set(),
        &"GGGGAAACCCC".parse().unwrap(),
    );
    assert_eq!(db, want.structure.dot_bracket());
    assert_eq!(e, want.energy.kcal());
    let mut log_q = 0.0;
    assert_eq!(
        unsafe { seqsem_sequence_log_partition(params, seq.as_ptr(), &mut log_q) },
        SeqsemStatus::Ok
    );
    assert!(log_q >= -e / 0.6163 - 1e-9);
    unsafe { seqsem_params_free(params) };
}

#[test]
fn errors_are_reported() {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { seqsem_structure_parse(c("((..)").as_ptr(), &mut s) },
        SeqsemStatus::ParseError
    );
    assert!(s.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { seqsem_structure_parse(ptr::null(), &mut s) },
        SeqsemStatus::NullPointer
    );
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { seqsem_params_from_file(c("/nonexistent/params.toml").as_ptr(), &mut p) },
        SeqsemStatus::IoError
    );
    assert_eq!(unsafe { seqsem_params_default(&mut p) }, SeqsemStatus::Ok);
    assert!(last_error().is_empty());
    let mut out = 0.0;
    assert_eq!(
        unsafe { seqsem_sequence_log_partition(p, c("ACGX").as_ptr(), &mut out) },
        SeqsemStatus::ParseError
    );
    assert!(last_error().contains('X'));
    assert_eq!(
        unsafe { seqsem_params_set_temperature(p, f64::NAN) },
        SeqsemStatus::InvalidArgument
    );
    let mut hex = [0 as std::ffi::c_char; 65];
    assert_eq!(
        unsafe { seqsem_params_checksum(p, hex.as_mut_ptr(), 65) },
        SeqsemStatus::Ok
    );
    assert_eq!(unsafe { CStr::from_ptr(hex.as_ptr()) }.to_bytes().len(), 64);
    unsafe { seqsem_params_free(p) };
    unsafe { seqsem_params_free(ptr::null_mut()) };
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/seqsem.h")).unwrap();
    for name in [
        "seqsem_params_default",
        "seqsem_structure_parse",
        "seqsem_partition_new",
        "seqsem_partition_log_q",
        "seqsem_sample",
        "seqsem_fold_mfe",
        "seqsem_last_error_message",
        "typedef struct SeqsemPartition SeqsemPartition",
        "SEQSEM_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let status = match std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir}/include"))
        .arg(format!("{dir}/examples/demo.c"))
        .status()
    {
        Ok(s) => s,
        Err(_) => return, // no C compiler available
    };
    assert!(status.success());
}
