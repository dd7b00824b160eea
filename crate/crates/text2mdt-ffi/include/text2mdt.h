#ifndef TEXT2MDT_H
#define TEXT2MDT_H

/* Generated by cbindgen from the text2mdt-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#endif /* TEXT2MDT_H */
