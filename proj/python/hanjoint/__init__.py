"""Joint syllable/grapheme CTC decoding for Korean ASR."""

from ._core import (
    HanjointError,
    Vocabulary,
    __version__,
    brute_force_ctc,
    cer,
    compose_jamo,
    ctc_log_prob,
    ctc_loss_and_grad,
    decompose_syllable,
    decompose_text,
    edit_distance,
    gen_lattice,
    greedy_decode,
    jamo_inventory,
    joint_decode,
    load_lattice,
    log_softmax,
    multitask_loss,
    prefix_beam_search,
    random_lattice,
    run_cli,
    save_lattice,
    space_normalize,
    swer,
    text_to_tokens,
    tokens_to_text,
    wer,
)

__all__ = [name for name in dir() if not name.startswith("_")]
