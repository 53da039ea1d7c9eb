#include <stdio.h>
#include <string.h>
#include "auvsim.h"

int main(void) {
    AuvsimMessage *hb = NULL;
    if (auvsim_message_new(0, &hb) != AUVSIM_STATUS_OK) return 1;
    auvsim_message_set(hb, "type", 0, 12.0);
    uint8_t buf[64];
    uintptr_t n = 0;
    if (auvsim_message_encode(hb, 3, 1, 1, buf, sizeof buf, &n) != AUVSIM_STATUS_OK || n != 17) return 2;
    auvsim_message_free(hb);

    AuvsimParser *p = NULL;
    auvsim_parser_new(&p);
    uintptr_t decoded = 0;
    auvsim_parser_feed(p, buf, n, &decoded);
    AuvsimMessage *out = NULL;
    AuvsimFrameHeader h;
    if (decoded != 1 || auvsim_parser_next(p, &out, &h) != AUVSIM_STATUS_OK) return 3;
    double v = 0;
    auvsim_message_get(out, "type", 0, &v);
    if (v != 12.0 || h.seq != 3) return 4;
    if (auvsim_message_get(out, "nope", 0, &v) != AUVSIM_STATUS_UNKNOWN_FIELD) return 5;
    printf("%s\n", auvsim_last_error());
    auvsim_message_free(out);
    auvsim_parser_free(p);
    return 0;
}
