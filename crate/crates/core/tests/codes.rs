use std::sync::OnceLock;

use permloc::blocks::BlockConcatSpec;
use permloc::extend::{build_f, ExtendedSpec};
use permloc::gf::{build_distinct_code, DistinctCode, FieldSpec};
use permloc::{Caps, ErasedView, LocalRepair};
use proptest::prelude::*;

#[test]
fn gf16_extension_with_block_inner_set() {
    let caps = Caps::default();
    let code = build_distinct_code(&FieldSpec::new(4).unwrap(), 6, None, &caps).unwrap();
    assert_eq!(code.len(), 21120);
    let inner = BlockConcatSpec::new(10, 2)
        .unwrap()
        .generate(&caps)
        .unwrap();
    let spec = ExtendedSpec::new(inner, 1, code, &caps).unwrap();
    assert_eq!(spec.claimed_locality(), 6);
    assert_eq!(spec.count(), 3840u32 * num_bigint::BigUint::from(21120u32));
    // streaming: spot-check a stride of members without materializing
    for m in spec.iter().step_by(99_991).take(50) {
        assert_eq!(spec.decompose(&m).map(|_| ()), Ok(()));
        for j in 0..16 {
            let r = spec.repair(&ErasedView::new(&m, &[j]).unwrap()).unwrap();
            assert_eq!(r.symbol, m.get(j));
            assert!(r.accesses() <= 6);
        }
    }
}

fn gf8_code() -> &'static DistinctCode {
    static CODE: OnceLock<DistinctCode> = OnceLock::new();
    CODE.get_or_init(|| {
        build_distinct_code(&FieldSpec::new(3).unwrap(), 6, None, &Caps::default()).unwrap()
    })
}

proptest! {
    #[test]
    fn codeword_erasures_are_filled(idx in 0usize..1792, e in 0usize..6) {
        let code = gf8_code();
        let w = code.codewords()[idx].clone();
        let mut partial: Vec<Option<usize>> = w.iter().copied().map(Some).collect();
        partial[e] = None;
        prop_assert_eq!(code.erasure_interpolate(&partial).unwrap(), w);
    }

    #[test]
    fn replacement_image_is_complement(mask in any::<u16>()) {
        let e: Vec<usize> = (0..16).filter(|i| mask >> i & 1 == 1).collect();
        let f = build_f(16, &e).unwrap();
        let mut image: Vec<usize> = f.forward().iter().chain(&e).copied().collect();
        image.sort_unstable();
        prop_assert_eq!(image, (0..16).collect::<Vec<_>>());
    }
}
