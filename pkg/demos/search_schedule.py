"""Demo: resizing-factor search ranges and the smart hypothesis schedule.

Walks through the worked search-range examples (known and unknown
in-camera image factor, cropped image aspect) and shows how the 1.6
cropping-ratio cutoff shrinks the hypothesis count for a 4000x3000 image
against a 1280x720 video.

Run:  python3 demos/search_schedule.py
"""

from prnu_mixed import (MediaDims, cropping_ratio, hypothesis_schedule,
                        search_range)
from prnu_mixed.search import implied_cropping_ratio


def main():
    print("1) image 4000x3000 (r1 = 1) vs Full HD video:")
    sr = search_range(MediaDims(1080, 1920), MediaDims(3000, 4000))
    print(f"   search range [{sr.lo:.2f}, {sr.hi:.2f}]  ({sr.case})\n")

    print("2) same pair, but the image was already resized in camera (r1 = 0.5):")
    sr = search_range(MediaDims(1080, 1920), MediaDims(1500, 2000), r1=0.5)
    print(f"   search range [{sr.lo:.2f}, {sr.hi:.2f}]  — factors above 1 "
          "compensate the image's own downscale\n")

    print("3) image 1200x1200 cropped from a 4:3 sensor vs 1200x900 video:")
    sr = search_range(MediaDims(900, 1200), MediaDims(1200, 1200),
                      sensor_aspect=4 / 3)
    print(f"   search range [{sr.lo:.2f}, {sr.hi:.2f}]  ({sr.case}) — "
          "contains the true factor 0.75\n")

    print("4) cropping ratio of a 2000x1500 resized frame vs 1280x720 video:")
    print(f"   {cropping_ratio((1500, 2000), (720, 1280)).value}\n")

    print("5) schedule for image 4000x3000 vs HD video 1280x720:")
    sr = search_range(MediaDims(720, 1280), MediaDims(3000, 4000))
    exhaustive = hypothesis_schedule(sr, max_crop_ratio=float("inf"))
    smart = hypothesis_schedule(sr, max_crop_ratio=1.6)
    print(f"   exhaustive lattice: {len(exhaustive)} factors")
    print(f"   cropping ratio <= 1.6: {len(smart)} factors")
    print("   first five hypotheses (near-no-crop first):")
    for f in smart[:5]:
        print(f"     factor {f:.4f}  ->  implied cropping ratio "
              f"{implied_cropping_ratio(f, sr):.4f}")


if __name__ == "__main__":
    main()
