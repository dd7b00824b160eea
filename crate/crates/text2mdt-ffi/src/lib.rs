//! C ABI surface for the text2mdt toolkit (placeholder; filled in below).
