/* Second simulator sharing flag letters with nr_pbchsim.c. */
#include <stdlib.h>
#include <unistd.h>

int main(int argc, char **argv) {
  double snr0_ul = 0;
  int c;
  while ((c = getopt(argc, argv, "s:")) != -1) {
    switch (c) {
      case 's':
        snr0_ul = atof(optarg);
        break;
    }
  }
  return snr0_ul > 0;
}
