"""
The tripartite micro transformer: shared encoder, CTC head, AR decoder and AMD decoder.
"""

from model.vocab import (
    BLANK_ID,
    FIRST_TOKEN_ID,
    MASK_ID,
    NUM_SPECIAL_TOKENS,
    SOS_EOS_ID,
    real_token_ids,
    render_tokens,
    token_symbol,
)
from model.masks import AttentionMask, build_block_mask, build_causal_mask
from model.params import (
    AMD_DECODER,
    AR_DECODER,
    CTC_HEAD,
    ENCODER,
    POSITIONS,
    WEIGHT_GROUPS,
    ModelParams,
    init_params,
    parameter_shapes,
    sinusoidal_table,
    weight_group,
)
from model.encoder import EncoderOutput, encoder_forward, stack_frames
from model.decoders import (
    amd_decoder_forward,
    amd_decoder_logprobs,
    ar_decoder_forward,
    ar_decoder_forward_batch,
    ctc_head,
)
from model.checkpoint import (
    load_checkpoint,
    read_container,
    save_checkpoint,
    write_container,
)

__all__ = [
    # Vocabulary
    "BLANK_ID",
    "FIRST_TOKEN_ID",
    "MASK_ID",
    "NUM_SPECIAL_TOKENS",
    "SOS_EOS_ID",
    "real_token_ids",
    "render_tokens",
    "token_symbol",
    # Masks
    "AttentionMask",
    "build_block_mask",
    "build_causal_mask",
    # Parameters
    "AMD_DECODER",
    "AR_DECODER",
    "CTC_HEAD",
    "ENCODER",
    "POSITIONS",
    "WEIGHT_GROUPS",
    "ModelParams",
    "init_params",
    "parameter_shapes",
    "sinusoidal_table",
    "weight_group",
    # Forwards
    "EncoderOutput",
    "encoder_forward",
    "stack_frames",
    "amd_decoder_forward",
    "amd_decoder_logprobs",
    "ar_decoder_forward",
    "ar_decoder_forward_batch",
    "ctc_head",
    # Checkpoints
    "load_checkpoint",
    "read_container",
    "save_checkpoint",
    "write_container",
]
