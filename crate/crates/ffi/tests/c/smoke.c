#include <stdio.h>
#include <string.h>

#include "cfstammer.h"

static int check(int ok, const char *what) {
    if (!ok) {
        const char *err = cfs_last_error();
        fprintf(stderr, "FAIL %s: %s\n", what, err ? err : "(no message)");
    }
    return ok ? 0 : 1;
}

int main(void) {
    int failures = 0;

    CfsStream *s = NULL;
    uint64_t buf[6];
    failures += check(cfs_stream_new("baum-sweet a=1 b=2", &s) == CFS_STATUS_OK, "stream_new");
    failures += check(cfs_stream_fill(s, buf, 6) == CFS_STATUS_OK, "stream_fill");
    uint64_t expect[6] = {2, 2, 1, 2, 2, 1};
    failures += check(memcmp(buf, expect, sizeof buf) == 0, "baum-sweet letters");
    cfs_stream_free(s);

    failures += check(cfs_stream_new("no-such-family", &s) == CFS_STATUS_UNKNOWN_FAMILY, "unknown family");
    failures += check(cfs_last_error() != NULL, "error message");

    uint64_t word[3] = {1, 2, 3};
    char *k = NULL;
    failures += check(cfs_continuant(word, 3, &k) == CFS_STATUS_OK && strcmp(k, "10") == 0, "continuant");
    cfs_string_free(k);

    uint64_t sq[6] = {1, 1, 2, 1, 1, 2};
    CfsWitnessList *list = NULL;
    CfsWitness w;
    int found = 0;
    failures += check(cfs_detect_repetitions(sq, 6, 0, 3, 2, &list) == CFS_STATUS_OK, "detect");
    for (size_t i = 0; i < cfs_witness_list_len(list); i++) {
        cfs_witness_list_get(list, i, &w);
        found |= w.r == 0 && w.s == 3 && w.w_num == 2 && w.w_den == 1;
    }
    failures += check(found, "square witness");
    failures += check(cfs_witness_list_get(list, 99, &w) == CFS_STATUS_OUT_OF_RANGE, "out of range");
    cfs_witness_list_free(list);

    if (failures == 0) {
        printf("ok\n");
    }
    return failures;
}
